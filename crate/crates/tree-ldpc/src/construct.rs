//! The tree-based code constructions.
//!
//! Every family starts from a regular tree of alternating variable/check
//! layers and closes it into a finite graph without creating short cycles:
//!
//! * Type I-A: two mirrored depth-(g/2 - 1) trees of degree 3, leaf layers
//!   joined through three fixed permutations chosen per target girth g.
//! * Type I-B: two mirrored depth-2 trees of degree q, leaf layers joined
//!   through the MOLS family over GF(q); each branch carries one imaginary
//!   leaf that is removed (with its edges) after wiring, plus a small fixed
//!   edge deletion, leaving a q-regular girth-6 graph on q^2 + 1 nodes a side.
//! * Type II, three layers: one tree (root, q+1 branches, q variables each)
//!   plus an added layer of q^2 checks wired by the MOLS family; girth 6,
//!   (q+1)-regular, q^2 + q + 1 nodes a side.
//! * The reduction of the above: deleting the root, the branch checks, one
//!   added-layer check and its variable neighbors drops it to a q-regular
//!   girth-6 graph on q^2 - 1 nodes a side.
//! * Type II, four layers: the same idea one level deeper, with q^3 added
//!   variables and girth 8.

use crate::field::{FieldError, FieldSpec, MolsFamily};
use crate::graph::{CodeMeta, Family, NodeLabel, Side, TannerGraph};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("unsupported girth {0} (supported: 6, 8, 10, 12)")]
    UnsupportedGirth(u32),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("family {family} requires the --{param} parameter")]
    MissingParam { family: Family, param: &'static str },
    #[error("graph is not an unreduced three-layer construction with labels")]
    NotReducible,
    #[error("order mismatch: graph was built over GF({built}), reduction asked for q = {asked}")]
    OrderMismatch { built: u32, asked: u32 },
    #[error("family {0} is not a tree construction; use the random baseline builder")]
    NotTreeFamily(Family),
}

/// The three leaf-layer permutations closing a Type I-A pair of trees, acting
/// on the within-branch leaf index 0..2^(g/2 - 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationTriple {
    pub girth: u32,
    pub pi: Vec<usize>,
    pub tau: Vec<usize>,
    pub tau_prime: Vec<usize>,
}

/// The fixed permutations for each supported girth. `pi` joins equal branch
/// classes, `tau` joins class i to class i+1, and `tau_prime` closes class 2
/// back to class 0.
///
/// Every table is an affine map over GF(2)^(g/2-2) on the leaf index, with
/// `tau_prime(j) = tau(j) XOR m/2` where m is the class size: leaf pairs
/// that branch apart late are sent to pairs that branch apart early, which
/// is what pushes every closure cycle out to length g. The g=12 `pi` comes
/// from an exhaustive search over such maps; the triple is certified by the
/// girth and distance tests (girth 12, d_min 20).
pub fn type1a_permutations(girth: u32) -> Result<PermutationTriple, ConstructError> {
    let (pi, tau, tau_prime): (&[usize], &[usize], &[usize]) = match girth {
        6 => (&[0, 1], &[0, 1], &[0, 1]),
        8 => (&[0, 3, 2, 1], &[0, 3, 2, 1], &[2, 1, 0, 3]),
        10 => (
            &[0, 5, 2, 7, 4, 1, 6, 3],
            &[0, 7, 2, 5, 4, 3, 6, 1],
            &[4, 3, 6, 1, 0, 7, 2, 5],
        ),
        12 => (
            &[0, 10, 6, 12, 3, 9, 5, 15, 8, 2, 14, 4, 11, 1, 13, 7],
            &[0, 15, 6, 9, 12, 3, 10, 5, 8, 7, 14, 1, 4, 11, 2, 13],
            &[8, 7, 14, 1, 4, 11, 2, 13, 0, 15, 6, 9, 12, 3, 10, 5],
        ),
        g => return Err(ConstructError::UnsupportedGirth(g)),
    };
    Ok(PermutationTriple {
        girth,
        pi: pi.to_vec(),
        tau: tau.to_vec(),
        tau_prime: tau_prime.to_vec(),
    })
}

/// Incremental graph assembly with structural labels. Nodes marked imaginary
/// are scaffolding: they may receive edges but are dropped, edges and all,
/// before the graph is finished.
struct Builder {
    sides: Vec<Side>,
    mirrors: Vec<bool>,
    layers: Vec<u32>,
    paths: Vec<Vec<u32>>,
    imaginary: Vec<bool>,
    edges: Vec<(usize, usize)>, // always (variable id, check id)
}

impl Builder {
    fn new() -> Self {
        Builder {
            sides: Vec::new(),
            mirrors: Vec::new(),
            layers: Vec::new(),
            paths: Vec::new(),
            imaginary: Vec::new(),
            edges: Vec::new(),
        }
    }

    fn push(&mut self, side: Side, mirror: bool, layer: u32, path: Vec<u32>, imaginary: bool) -> usize {
        let id = self.sides.len();
        self.sides.push(side);
        self.mirrors.push(mirror);
        self.layers.push(layer);
        self.paths.push(path);
        self.imaginary.push(imaginary);
        id
    }

    fn add(&mut self, side: Side, mirror: bool, layer: u32, path: Vec<u32>) -> usize {
        self.push(side, mirror, layer, path, false)
    }

    fn add_imaginary(&mut self, side: Side, mirror: bool, layer: u32, path: Vec<u32>) -> usize {
        self.push(side, mirror, layer, path, true)
    }

    fn connect(&mut self, a: usize, b: usize) {
        let pair = match (self.sides[a], self.sides[b]) {
            (Side::Variable, Side::Check) => (a, b),
            (Side::Check, Side::Variable) => (b, a),
            _ => panic!("edge endpoints must lie on opposite sides"),
        };
        self.edges.push(pair);
    }

    fn remove_edge(&mut self, a: usize, b: usize) {
        let pair = if self.sides[a] == Side::Variable {
            (a, b)
        } else {
            (b, a)
        };
        let before = self.edges.len();
        self.edges.retain(|&e| e != pair);
        assert_eq!(before, self.edges.len() + 1, "edge to remove must exist exactly once");
    }

    /// Final numbering sorts each side by (mirror, layer, path), so node
    /// indices are reproducible regardless of emission order.
    fn finish(self, meta: CodeMeta) -> TannerGraph {
        let order_key = |id: usize| (self.mirrors[id], self.layers[id], self.paths[id].clone());
        let mut var_ids: Vec<usize> = Vec::new();
        let mut check_ids: Vec<usize> = Vec::new();
        for id in 0..self.sides.len() {
            if self.imaginary[id] {
                continue;
            }
            match self.sides[id] {
                Side::Variable => var_ids.push(id),
                Side::Check => check_ids.push(id),
            }
        }
        var_ids.sort_by_key(|&id| order_key(id));
        check_ids.sort_by_key(|&id| order_key(id));

        let mut var_index = vec![usize::MAX; self.sides.len()];
        for (new, &id) in var_ids.iter().enumerate() {
            var_index[id] = new;
        }
        let mut check_index = vec![usize::MAX; self.sides.len()];
        for (new, &id) in check_ids.iter().enumerate() {
            check_index[id] = new;
        }

        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(v, c)| !self.imaginary[v] && !self.imaginary[c])
            .map(|&(v, c)| (var_index[v], check_index[c]))
            .collect();
        let mut graph = TannerGraph::from_edges(var_ids.len(), check_ids.len(), &edges)
            .expect("tree constructions emit simple in-range edges");
        for v in 0..graph.num_vars() {
            assert!(!graph.var_neighbors(v).is_empty(), "isolated variable node {v}");
        }
        for c in 0..graph.num_checks() {
            assert!(!graph.check_neighbors(c).is_empty(), "isolated check node {c}");
        }

        let label = |id: usize| NodeLabel {
            side: self.sides[id],
            mirror: self.mirrors[id],
            layer: self.layers[id],
            path: self.paths[id].clone(),
        };
        let var_labels: Vec<NodeLabel> = var_ids.iter().map(|&id| label(id)).collect();
        let check_labels: Vec<NodeLabel> = check_ids.iter().map(|&id| label(id)).collect();
        graph.attach_labels(var_labels, check_labels);
        graph.set_meta(meta);
        graph
    }
}

fn opposite(side: Side) -> Side {
    match side {
        Side::Variable => Side::Check,
        Side::Check => Side::Variable,
    }
}

/// Grows a degree-3 tree: the root has three children, every later node two.
/// Returns the leaf layer in (branch class, binary path) order, so the leaf
/// at position class * 2^(depth-1) + j has within-class index j.
fn grow_tree_d3(b: &mut Builder, mirror: bool, root_side: Side, depth: u32) -> Vec<usize> {
    let root = b.add(root_side, mirror, 0, vec![]);
    let mut frontier = vec![root];
    let mut side = root_side;
    for layer in 1..=depth {
        side = opposite(side);
        let branches = if layer == 1 { 3 } else { 2 };
        let mut next = Vec::with_capacity(frontier.len() * branches);
        for &parent in &frontier {
            for child in 0..branches {
                let mut path = b.paths[parent].clone();
                path.push(child as u32);
                let node = b.add(side, mirror, layer, path);
                b.connect(parent, node);
                next.push(node);
            }
        }
        frontier = next;
    }
    frontier
}

/// Two mirrored degree-3 trees of depth g/2 - 1 whose leaf layers are joined
/// through the fixed permutations: within-class by `pi`, class i to i+1 by
/// `tau`, and class 2 back to class 0 by `tau_prime`. Every leaf ends with
/// degree 3 and the resulting graph has girth exactly g.
pub fn build_type1a(girth: u32) -> Result<TannerGraph, ConstructError> {
    let perms = type1a_permutations(girth)?;
    let depth = girth / 2 - 1;
    let m = 1usize << (depth - 1);
    let mut b = Builder::new();
    let leaves = grow_tree_d3(&mut b, false, Side::Variable, depth);
    let mirror_leaves = grow_tree_d3(&mut b, true, Side::Check, depth);
    for class in 0..3usize {
        for j in 0..m {
            let from = leaves[class * m + j];
            b.connect(from, mirror_leaves[class * m + perms.pi[j]]);
            let to = if class < 2 {
                mirror_leaves[(class + 1) * m + perms.tau[j]]
            } else {
                mirror_leaves[perms.tau_prime[j]]
            };
            b.connect(from, to);
        }
    }
    Ok(b.finish(CodeMeta {
        family: Family::Type1A,
        p: None,
        s: None,
        girth_by_design: Some(girth),
        degenerate: false,
        seed: None,
    }))
}

/// Grows one Type I-B half: a root with q branches, each branch carrying the
/// leaves indexed by GF(q), where index 0 is the imaginary one. Returns
/// `leaves[branch][index]`.
fn grow_type1b_tree(b: &mut Builder, mirror: bool, root_side: Side, q: u32) -> Vec<Vec<usize>> {
    let root = b.add(root_side, mirror, 0, vec![]);
    let branch_side = opposite(root_side);
    let mut leaves = Vec::with_capacity(q as usize);
    for i in 0..q {
        let branch = b.add(branch_side, mirror, 1, vec![i]);
        b.connect(root, branch);
        let mut row = Vec::with_capacity(q as usize);
        for j in 0..q {
            let leaf = if j == 0 {
                b.add_imaginary(root_side, mirror, 2, vec![i, j])
            } else {
                b.add(root_side, mirror, 2, vec![i, j])
            };
            b.connect(branch, leaf);
            row.push(leaf);
        }
        leaves.push(row);
    }
    leaves
}

/// Two mirrored degree-q trees joined leaf-to-leaf by the MOLS family:
/// variable leaf (i, j) meets check leaf (t, M^(i)(j, t)) for every t. The
/// imaginary index-0 leaves absorb what would be excess edges and are then
/// dropped; the remaining surplus on branch 0 is cut directly. q-regular on
/// q^2 + 1 nodes a side with girth 6 for q >= 3; q = 2 degenerates to a
/// single 10-cycle.
pub fn build_type1b(p: u32, s: u32) -> Result<TannerGraph, ConstructError> {
    let field = FieldSpec::new(p, s)?;
    let q = field.order();
    let mols = MolsFamily::build(&field);
    let mut b = Builder::new();
    let var_leaves = grow_type1b_tree(&mut b, false, Side::Variable, q);
    let check_leaves = grow_type1b_tree(&mut b, true, Side::Check, q);
    for i in 0..q {
        for j in 0..q {
            for t in 0..q {
                let u = mols.square(i).get(j, t);
                b.connect(var_leaves[i as usize][j as usize], check_leaves[t as usize][u as usize]);
            }
        }
    }
    // Branch 0 pairs up with itself under the degenerate square M^(0): each
    // real leaf there still has one edge too many, to its namesake.
    for j in 1..q {
        b.remove_edge(var_leaves[0][j as usize], check_leaves[0][j as usize]);
    }
    let degenerate = q == 2;
    Ok(b.finish(CodeMeta {
        family: Family::Type1B,
        p: Some(p),
        s: Some(s),
        girth_by_design: if degenerate { None } else { Some(6) },
        degenerate,
        seed: None,
    }))
}

/// One tree of root + q+1 branch checks + q(q+1) variables, closed by an
/// added layer of q^2 checks indexed (k, m): branch 0's variable k meets all
/// (k, m); branch i >= 1's variable j meets (t, M^(i-1)(j, t)) for every t.
/// (q+1)-regular on q^2 + q + 1 nodes a side, girth 6.
pub fn build_type2_l3(p: u32, s: u32) -> Result<TannerGraph, ConstructError> {
    let field = FieldSpec::new(p, s)?;
    let q = field.order();
    let mols = MolsFamily::build(&field);
    let mut b = Builder::new();
    let root = b.add(Side::Variable, false, 0, vec![]);
    let mut l2 = Vec::with_capacity(q as usize + 1);
    for i in 0..=q {
        let branch = b.add(Side::Check, false, 1, vec![i]);
        b.connect(root, branch);
        let mut row = Vec::with_capacity(q as usize);
        for j in 0..q {
            let v = b.add(Side::Variable, false, 2, vec![i, j]);
            b.connect(branch, v);
            row.push(v);
        }
        l2.push(row);
    }
    let mut added = vec![vec![0usize; q as usize]; q as usize];
    for k in 0..q {
        for m in 0..q {
            added[k as usize][m as usize] = b.add(Side::Check, false, 3, vec![k, m]);
        }
    }
    for k in 0..q {
        for m in 0..q {
            b.connect(l2[0][k as usize], added[k as usize][m as usize]);
        }
    }
    for i in 1..=q {
        for j in 0..q {
            for t in 0..q {
                let m = mols.square(i - 1).get(j, t);
                b.connect(l2[i as usize][j as usize], added[t as usize][m as usize]);
            }
        }
    }
    Ok(b.finish(CodeMeta {
        family: Family::Type2L3,
        p: Some(p),
        s: Some(s),
        girth_by_design: Some(6),
        degenerate: false,
    seed: None,
    }))
}

/// Shrinks a finished three-layer graph to its affine-plane core: the root,
/// every branch check, the added check (0, 0), and that check's variable
/// neighbors are deleted. Each remaining node loses exactly one edge, giving
/// a q-regular girth-6 graph on q^2 - 1 nodes a side.
pub fn reduce_to_eg(g3: &TannerGraph, q: u32) -> Result<TannerGraph, ConstructError> {
    let meta = g3.meta().ok_or(ConstructError::NotReducible)?;
    if meta.family != Family::Type2L3 {
        return Err(ConstructError::NotReducible);
    }
    let (var_labels, check_labels) = match (g3.var_labels(), g3.check_labels()) {
        (Some(v), Some(c)) => (v, c),
        _ => return Err(ConstructError::NotReducible),
    };
    let built = match (meta.p, meta.s) {
        (Some(p), Some(s)) => p.pow(s),
        _ => return Err(ConstructError::NotReducible),
    };
    if built != q {
        return Err(ConstructError::OrderMismatch { built, asked: q });
    }

    let mut check_dead = vec![false; g3.num_checks()];
    let mut corner = None;
    for (c, label) in check_labels.iter().enumerate() {
        if label.layer == 1 {
            check_dead[c] = true;
        } else if label.layer == 3 && label.path == [0, 0] {
            check_dead[c] = true;
            corner = Some(c);
        }
    }
    let corner = corner.ok_or(ConstructError::NotReducible)?;
    let mut var_dead = vec![false; g3.num_vars()];
    for (v, label) in var_labels.iter().enumerate() {
        if label.layer == 0 {
            var_dead[v] = true;
        }
    }
    for &v in g3.check_neighbors(corner) {
        var_dead[v] = true;
    }

    let mut var_index = vec![usize::MAX; g3.num_vars()];
    let mut kept_var_labels = Vec::new();
    for v in 0..g3.num_vars() {
        if !var_dead[v] {
            var_index[v] = kept_var_labels.len();
            kept_var_labels.push(var_labels[v].clone());
        }
    }
    let mut check_index = vec![usize::MAX; g3.num_checks()];
    let mut kept_check_labels = Vec::new();
    for c in 0..g3.num_checks() {
        if !check_dead[c] {
            check_index[c] = kept_check_labels.len();
            kept_check_labels.push(check_labels[c].clone());
        }
    }
    let mut edges = Vec::new();
    for v in 0..g3.num_vars() {
        if var_dead[v] {
            continue;
        }
        for &c in g3.var_neighbors(v) {
            if !check_dead[c] {
                edges.push((var_index[v], check_index[c]));
            }
        }
    }
    let mut graph = TannerGraph::from_edges(kept_var_labels.len(), kept_check_labels.len(), &edges)
        .expect("reduction preserves a simple graph");
    for v in 0..graph.num_vars() {
        assert!(!graph.var_neighbors(v).is_empty(), "isolated variable after reduction");
    }
    for c in 0..graph.num_checks() {
        assert!(!graph.check_neighbors(c).is_empty(), "isolated check after reduction");
    }
    graph.attach_labels(kept_var_labels, kept_check_labels);
    graph.set_meta(CodeMeta {
        family: Family::Type2L3Eg,
        p: meta.p,
        s: meta.s,
        girth_by_design: Some(6),
        degenerate: q == 2,
        seed: None,
    });
    Ok(graph)
}

/// The four-layer analogue: root, q+1 branch checks, q variables per branch,
/// q checks per variable, closed by q^3 added variables indexed (a, b, c).
/// Branch 0's check (j, k) meets (j, k, t) for every t; branch i >= 1's
/// check (j, k) meets (t, M^(i-1)(k, t), M^(i mod q)(j, t)). (q+1)-regular on
/// q^3 + q^2 + q + 1 variables and as many checks, girth 8.
pub fn build_type2_l4(p: u32, s: u32) -> Result<TannerGraph, ConstructError> {
    let field = FieldSpec::new(p, s)?;
    let q = field.order();
    let mols = MolsFamily::build(&field);
    let mut b = Builder::new();
    let root = b.add(Side::Variable, false, 0, vec![]);
    let mut l3 = Vec::with_capacity(q as usize + 1);
    for i in 0..=q {
        let branch = b.add(Side::Check, false, 1, vec![i]);
        b.connect(root, branch);
        let mut mid = Vec::with_capacity(q as usize);
        for j in 0..q {
            let v = b.add(Side::Variable, false, 2, vec![i, j]);
            b.connect(branch, v);
            let mut bottom = Vec::with_capacity(q as usize);
            for k in 0..q {
                let c = b.add(Side::Check, false, 3, vec![i, j, k]);
                b.connect(v, c);
                bottom.push(c);
            }
            mid.push(bottom);
        }
        l3.push(mid);
    }
    let qu = q as usize;
    let mut added = vec![vec![vec![0usize; qu]; qu]; qu];
    for a in 0..q {
        for bb in 0..q {
            for c in 0..q {
                added[a as usize][bb as usize][c as usize] =
                    b.add(Side::Variable, false, 4, vec![a, bb, c]);
            }
        }
    }
    for j in 0..q {
        for k in 0..q {
            for t in 0..q {
                b.connect(l3[0][j as usize][k as usize], added[j as usize][k as usize][t as usize]);
            }
        }
    }
    // Each class-i check (i >= 1) is wired to one variable per t, tracing the
    // affine line {(t, k + a*t, j + 2a*k + a^2*t)} through the grid, where
    // a = i - 1 in field labels. Class 0 contributes the vertical lines
    // (fixed first two coordinates). The line directions (1, a, a^2) together
    // with (0, 0, 1) form a conic arc in the projective plane: no three are
    // coplanar, so no triangle of lines (6-cycle) exists. The 2a*k shear
    // aligns each class's same-parent translates with the conic tangent,
    // which blocks the remaining 6-cycle shape (two sibling checks closing
    // through a third class); in characteristic 2 the shear vanishes.
    for i in 1..=q {
        let a = i - 1;
        let a_sq = field.mul(a, a).expect("label in range");
        let two_a = field.add(a, a).expect("label in range");
        for j in 0..q {
            for k in 0..q {
                let shear = field.mul(two_a, k).expect("label in range");
                let row = field.add(j, shear).expect("label in range");
                for t in 0..q {
                    let x = mols.square(a).get(k, t);
                    let y = mols.square(a_sq).get(row, t);
                    b.connect(
                        l3[i as usize][j as usize][k as usize],
                        added[t as usize][x as usize][y as usize],
                    );
                }
            }
        }
    }
    Ok(b.finish(CodeMeta {
        family: Family::Type2L4,
        p: Some(p),
        s: Some(s),
        girth_by_design: Some(8),
        degenerate: false,
        seed: None,
    }))
}

/// Parameters for [`build`], mirroring the command-line surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionParams {
    pub family: Family,
    /// Target girth, Type I-A only.
    pub girth: Option<u32>,
    /// Field characteristic, all field-based families.
    pub p: Option<u32>,
    /// Field extension degree; defaults to 1.
    pub s: Option<u32>,
}

/// Dispatches to the family builders, checking that the required parameters
/// are present.
pub fn build(params: &ConstructionParams) -> Result<TannerGraph, ConstructError> {
    let family = params.family;
    let need_field = |p: Option<u32>| {
        p.ok_or(ConstructError::MissingParam { family, param: "p" })
    };
    match family {
        Family::Type1A => {
            let girth = params.girth.ok_or(ConstructError::MissingParam {
                family,
                param: "girth",
            })?;
            build_type1a(girth)
        }
        Family::Type1B => build_type1b(need_field(params.p)?, params.s.unwrap_or(1)),
        Family::Type2L3 => build_type2_l3(need_field(params.p)?, params.s.unwrap_or(1)),
        Family::Type2L3Eg => {
            let p = need_field(params.p)?;
            let s = params.s.unwrap_or(1);
            let g3 = build_type2_l3(p, s)?;
            reduce_to_eg(&g3, p.pow(s))
        }
        Family::Type2L4 => build_type2_l4(need_field(params.p)?, params.s.unwrap_or(1)),
        Family::RandomRegular => Err(ConstructError::NotTreeFamily(family)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{DegreeProfile, Girth};
    use crate::matrix::write_alist;

    fn is_permutation(perm: &[usize]) -> bool {
        let mut seen = vec![false; perm.len()];
        perm.iter().all(|&v| {
            v < perm.len() && !std::mem::replace(&mut seen[v], true)
        })
    }

    #[test]
    fn permutations_are_valid_and_frozen() {
        for g in [6u32, 8, 10, 12] {
            let t = type1a_permutations(g).unwrap();
            let m = 1usize << (g / 2 - 2);
            assert_eq!(t.pi.len(), m);
            assert_eq!(t.tau.len(), m);
            assert_eq!(t.tau_prime.len(), m);
            assert!(is_permutation(&t.pi), "pi for g = {g}");
            assert!(is_permutation(&t.tau), "tau for g = {g}");
            assert!(is_permutation(&t.tau_prime), "tau_prime for g = {g}");
        }
        let t8 = type1a_permutations(8).unwrap();
        assert_eq!(t8.pi, t8.tau);
        assert_eq!(t8.tau_prime, vec![2, 1, 0, 3]);
        let t10 = type1a_permutations(10).unwrap();
        assert_eq!(t10.pi, vec![0, 5, 2, 7, 4, 1, 6, 3]);
        // tau_prime is tau shifted by half the class size, for every girth
        // with a nontrivial class.
        for g in [8u32, 10, 12] {
            let t = type1a_permutations(g).unwrap();
            let half = 1usize << (g / 2 - 3);
            let shifted: Vec<usize> = t.tau.iter().map(|&x| x ^ half).collect();
            assert_eq!(t.tau_prime, shifted, "tau_prime offset for g = {g}");
        }
        assert!(matches!(
            type1a_permutations(14),
            Err(ConstructError::UnsupportedGirth(14))
        ));
        assert!(matches!(
            type1a_permutations(7),
            Err(ConstructError::UnsupportedGirth(7))
        ));
    }

    fn assert_regular(profile: &DegreeProfile, d: usize) {
        assert!(profile.is_regular(d, d), "expected {d}-regular, got {profile:?}");
    }

    #[test]
    fn type1a_structure_and_girth() {
        for (g, n) in [(6u32, 10usize), (8, 22), (10, 46), (12, 94)] {
            let graph = build_type1a(g).unwrap();
            assert_eq!(graph.num_vars(), n, "g = {g}");
            assert_eq!(graph.num_checks(), n, "g = {g}");
            assert_regular(&graph.degree_profile(), 3);
            assert_eq!(graph.girth(), Girth::Finite(g as usize), "g = {g}");
            assert_eq!(graph.meta().unwrap().girth_by_design, Some(g));
            assert!(graph.var_labels().is_some());
        }
    }

    #[test]
    fn type1b_structure() {
        for (p, s) in [(3u32, 1u32), (2, 2), (5, 1), (2, 3)] {
            let q = p.pow(s) as usize;
            let graph = build_type1b(p, s).unwrap();
            assert_eq!(graph.num_vars(), q * q + 1, "q = {q}");
            assert_eq!(graph.num_checks(), q * q + 1);
            assert_regular(&graph.degree_profile(), q);
            assert_eq!(graph.girth(), Girth::Finite(6), "q = {q}");
            assert!(!graph.meta().unwrap().degenerate);
        }
    }

    #[test]
    fn type1b_q2_degenerates_to_one_cycle() {
        let graph = build_type1b(2, 1).unwrap();
        assert_eq!(graph.num_vars(), 5);
        assert_eq!(graph.num_checks(), 5);
        assert_regular(&graph.degree_profile(), 2);
        // A connected 2-regular bipartite graph on 10 nodes is a 10-cycle.
        assert_eq!(graph.girth(), Girth::Finite(10));
        let meta = graph.meta().unwrap();
        assert!(meta.degenerate);
        assert_eq!(meta.girth_by_design, None);
    }

    fn bfs_eccentricity(graph: &TannerGraph, start: usize) -> usize {
        let n = graph.num_vars();
        let total = n + graph.num_checks();
        let mut dist = vec![usize::MAX; total];
        dist[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        let mut ecc = 0;
        while let Some(x) = queue.pop_front() {
            let neighbors: Vec<usize> = if x < n {
                graph.var_neighbors(x).iter().map(|&c| c + n).collect()
            } else {
                graph.check_neighbors(x - n).to_vec()
            };
            for y in neighbors {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    ecc = ecc.max(dist[y]);
                    queue.push_back(y);
                }
            }
        }
        assert!(dist.iter().all(|&d| d != usize::MAX), "graph must be connected");
        ecc
    }

    #[test]
    fn type2_l3_q2_is_the_heawood_graph() {
        let graph = build_type2_l3(2, 1).unwrap();
        assert_eq!(graph.num_vars(), 7);
        assert_eq!(graph.num_checks(), 7);
        assert_regular(&graph.degree_profile(), 3);
        assert_eq!(graph.girth(), Girth::Finite(6));
        // 14 nodes, 3-regular, girth 6, diameter 3 pins it down uniquely.
        let diameter = (0..14).map(|x| bfs_eccentricity(&graph, x)).max().unwrap();
        assert_eq!(diameter, 3);
    }

    #[test]
    fn type2_l3_structure() {
        for (p, s) in [(2u32, 1u32), (3, 1), (2, 2), (5, 1)] {
            let q = p.pow(s) as usize;
            let graph = build_type2_l3(p, s).unwrap();
            let per_side = q * q + q + 1;
            assert_eq!(graph.num_vars(), per_side, "q = {q}");
            assert_eq!(graph.num_checks(), per_side);
            assert_regular(&graph.degree_profile(), q + 1);
            assert_eq!(graph.girth(), Girth::Finite(6), "q = {q}");
        }
    }

    #[test]
    fn eg_reduction_structure() {
        for (p, s) in [(2u32, 1u32), (3, 1), (2, 2)] {
            let q = p.pow(s) as usize;
            let g3 = build_type2_l3(p, s).unwrap();
            let graph = reduce_to_eg(&g3, q as u32).unwrap();
            assert_eq!(graph.num_vars(), q * q - 1, "q = {q}");
            assert_eq!(graph.num_checks(), q * q - 1);
            assert_regular(&graph.degree_profile(), q);
            assert_eq!(graph.girth(), Girth::Finite(6), "q = {q}");
            assert_eq!(graph.meta().unwrap().family, Family::Type2L3Eg);
            assert_eq!(graph.meta().unwrap().degenerate, q == 2);
        }
    }

    #[test]
    fn eg_reduction_rejects_bad_inputs() {
        let g3 = build_type2_l3(3, 1).unwrap();
        assert!(matches!(
            reduce_to_eg(&g3, 4),
            Err(ConstructError::OrderMismatch { built: 3, asked: 4 })
        ));
        let eg = reduce_to_eg(&g3, 3).unwrap();
        assert!(matches!(reduce_to_eg(&eg, 3), Err(ConstructError::NotReducible)));
        let plain = TannerGraph::from_edges(1, 1, &[(0, 0)]).unwrap();
        assert!(matches!(reduce_to_eg(&plain, 3), Err(ConstructError::NotReducible)));
    }

    #[test]
    fn type2_l4_structure_and_girth() {
        for (p, s) in [(2u32, 1u32), (3, 1), (2, 2), (5, 1), (3, 2)] {
            let q = p.pow(s) as usize;
            let graph = build_type2_l4(p, s).unwrap();
            let per_side = q * q * q + q * q + q + 1;
            assert_eq!(graph.num_vars(), per_side, "q = {q}");
            assert_eq!(graph.num_checks(), per_side);
            assert_regular(&graph.degree_profile(), q + 1);
            assert_eq!(graph.girth(), Girth::Finite(8), "q = {q}");
        }
    }

    #[test]
    fn field_errors_pass_through() {
        assert!(matches!(
            build_type1b(4, 1),
            Err(ConstructError::Field(FieldError::NonPrime(4)))
        ));
        assert!(matches!(
            build_type2_l4(2, 9),
            Err(ConstructError::Field(FieldError::UnsupportedSize { .. }))
        ));
    }

    #[test]
    fn dispatcher_routes_and_validates() {
        let params = ConstructionParams {
            family: Family::Type1A,
            girth: Some(8),
            p: None,
            s: None,
        };
        assert_eq!(build(&params).unwrap().num_vars(), 22);

        let params = ConstructionParams {
            family: Family::Type1A,
            girth: None,
            p: None,
            s: None,
        };
        assert!(matches!(
            build(&params),
            Err(ConstructError::MissingParam { param: "girth", .. })
        ));

        let params = ConstructionParams {
            family: Family::Type2L3Eg,
            girth: None,
            p: Some(2),
            s: Some(2),
        };
        let eg = build(&params).unwrap();
        assert_eq!(eg.num_vars(), 15);
        assert_eq!(eg.meta().unwrap().family, Family::Type2L3Eg);

        let params = ConstructionParams {
            family: Family::Type1B,
            girth: None,
            p: None,
            s: None,
        };
        assert!(matches!(
            build(&params),
            Err(ConstructError::MissingParam { param: "p", .. })
        ));

        let params = ConstructionParams {
            family: Family::RandomRegular,
            girth: None,
            p: None,
            s: None,
        };
        assert!(matches!(build(&params), Err(ConstructError::NotTreeFamily(_))));
    }

    #[test]
    fn builds_are_deterministic() {
        let alist_of = |g: &TannerGraph| {
            let mut buf = Vec::new();
            write_alist(&g.to_check_matrix(), &mut buf).unwrap();
            buf
        };
        assert_eq!(
            alist_of(&build_type1a(10).unwrap()),
            alist_of(&build_type1a(10).unwrap())
        );
        assert_eq!(
            alist_of(&build_type1b(2, 2).unwrap()),
            alist_of(&build_type1b(2, 2).unwrap())
        );
        assert_eq!(
            alist_of(&build_type2_l4(3, 1).unwrap()),
            alist_of(&build_type2_l4(3, 1).unwrap())
        );
    }

    #[test]
    fn labels_enumerate_layers_in_order() {
        let graph = build_type2_l3(2, 1).unwrap();
        let vl = graph.var_labels().unwrap();
        assert_eq!(vl[0].layer, 0);
        assert_eq!(vl[0].path, Vec::<u32>::new());
        assert!(vl.windows(2).all(|w| {
            (w[0].layer, &w[0].path) <= (w[1].layer, &w[1].path)
        }));
        let cl = graph.check_labels().unwrap();
        // Branch checks first (layer 1), then the added layer (layer 3).
        assert_eq!(cl[0].layer, 1);
        assert_eq!(cl[cl.len() - 1].layer, 3);
        assert_eq!(cl[cl.len() - 1].path, vec![1, 1]);
    }
}
