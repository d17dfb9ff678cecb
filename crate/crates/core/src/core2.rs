//! Stallings 2-cores of finite subsets of F.
//!
//! The forest holds the domain and range trees `A1, B1, A2, B2, ...` of the
//! reduced tree pairs; vertices are numbered consecutively, each tree in
//! preorder. The initial relation joins all roots and the `j`-th leaves of
//! `Ai` and `Bi`; it is then coarsened to the least relation closed under
//!
//! * (i) carets with related roots have related left and right children;
//! * (ii) carets with related left and related right children have related
//!   roots.
//!
//! The classes with their left and right child edges form the core graph.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::plmap::PLMap;
use crate::treepair::{tree_nodes, BinaryWord, TreePair};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub tree: usize,
    pub word: BinaryWord,
    pub children: Option<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct Forest {
    nodes: Vec<Node>,
    roots: Vec<usize>,
    leaves: Vec<Vec<usize>>,
    index: HashMap<(usize, BinaryWord), usize>,
}

impl Forest {
    /// Builds the forest of `pairs`, which must have offset 0. Unreduced
    /// pairs are reduced first and reported in the returned warnings.
    pub fn from_pairs(pairs: &[TreePair]) -> Result<(Forest, Vec<String>)> {
        let mut warnings = Vec::new();
        let mut forest = Forest { nodes: Vec::new(), roots: Vec::new(), leaves: Vec::new(), index: HashMap::new() };
        for (i, tp) in pairs.iter().enumerate() {
            if tp.offset() != 0 {
                return Err(Error::precondition(format!("generator {} is not in F: {tp}", i + 1)));
            }
            let tp = if tp.is_reduced() {
                tp.clone()
            } else {
                let r = tp.reduce();
                warnings.push(format!("generator {} was not reduced; using {r}", i + 1));
                r
            };
            forest.add_tree(tp.domain());
            forest.add_tree(tp.range());
        }
        Ok((forest, warnings))
    }

    fn add_tree(&mut self, leaves: &[BinaryWord]) {
        let tree = self.roots.len();
        let base = self.nodes.len();
        let words = tree_nodes(leaves);
        for (k, w) in words.iter().enumerate() {
            self.index.insert((tree, w.clone()), base + k);
        }
        for w in &words {
            let children = match (self.index.get(&(tree, w.child(false))), self.index.get(&(tree, w.child(true)))) {
                (Some(&l), Some(&r)) => Some((l, r)),
                _ => None,
            };
            self.nodes.push(Node { tree, word: w.clone(), children });
        }
        self.roots.push(base);
        self.leaves.push(leaves.iter().map(|l| self.index[&(tree, l.clone())]).collect());
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn num_trees(&self) -> usize {
        self.roots.len()
    }

    /// Global index of the vertex `word` of tree `tree`.
    pub fn vertex(&self, tree: usize, word: &BinaryWord) -> Option<usize> {
        self.index.get(&(tree, word.clone())).copied()
    }

    /// Carets as `(root, left, right)`.
    pub fn carets(&self) -> Vec<(usize, usize, usize)> {
        self.nodes.iter().enumerate().filter_map(|(i, n)| n.children.map(|(l, r)| (i, l, r))).collect()
    }
}

/// A partition of the forest vertices, kept as a union-find whose
/// representatives are the smallest member indices.
#[derive(Debug, Clone)]
pub struct Partition {
    parent: Vec<usize>,
}

impl Partition {
    pub fn discrete(n: usize) -> Self {
        Partition { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut y = x;
        while self.parent[y] != root {
            let next = self.parent[y];
            self.parent[y] = root;
            y = next;
        }
        root
    }

    fn rep(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; true iff they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.rep(a) == self.rep(b)
    }

    /// The smallest member of each vertex's class. Equal partitions give
    /// equal label vectors.
    pub fn labels(&self) -> Vec<usize> {
        (0..self.parent.len()).map(|x| self.rep(x)).collect()
    }

    pub fn count(&self) -> usize {
        (0..self.parent.len()).filter(|&x| self.parent[x] == x).count()
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut by: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..self.parent.len() {
            by.entry(self.rep(x)).or_default().push(x);
        }
        by.into_values().collect()
    }
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.labels() == other.labels()
    }
}

impl Eq for Partition {}

pub fn initial_relation(forest: &Forest) -> Partition {
    let mut p = Partition::discrete(forest.len());
    for w in forest.roots.windows(2) {
        p.union(w[0], w[1]);
    }
    for pair in forest.leaves.chunks(2) {
        for (u, v) in pair[0].iter().zip(&pair[1]) {
            p.union(*u, *v);
        }
    }
    p
}

/// Applies (i) and (ii) in rounds until nothing changes.
pub fn coarsen(forest: &Forest, rel: &Partition) -> Partition {
    let carets = forest.carets();
    let mut p = rel.clone();
    loop {
        let mut changed = false;
        let mut by_root: HashMap<usize, (usize, usize)> = HashMap::new();
        for &(r, l, rr) in &carets {
            let key = p.find(r);
            match by_root.get(&key) {
                Some(&(l0, r0)) => {
                    changed |= p.union(l, l0);
                    changed |= p.union(rr, r0);
                }
                None => {
                    by_root.insert(key, (l, rr));
                }
            }
        }
        let mut by_children: HashMap<(usize, usize), usize> = HashMap::new();
        for &(r, l, rr) in &carets {
            let key = (p.find(l), p.find(rr));
            match by_children.get(&key) {
                Some(&r0) => changed |= p.union(r, r0),
                None => {
                    by_children.insert(key, r);
                }
            }
        }
        if !changed {
            return p;
        }
    }
}

/// Coarsens by single applications of (i) or (ii), each chosen uniformly
/// among those that would change the relation. Returns the fixpoint and the
/// class count after every step.
pub fn coarsen_scheduled<R: Rng>(forest: &Forest, rel: &Partition, rng: &mut R) -> (Partition, Vec<usize>) {
    let carets = forest.carets();
    let mut p = rel.clone();
    let mut trace = vec![p.count()];
    loop {
        // (x, y, rule): rule true is (i), false is (ii)
        let mut ops: Vec<(usize, usize, bool)> = Vec::new();
        for (x, &(rx, lx, sx)) in carets.iter().enumerate() {
            for (y, &(ry, ly, sy)) in carets.iter().enumerate().skip(x + 1) {
                let roots = p.same(rx, ry);
                let kids = p.same(lx, ly) && p.same(sx, sy);
                if roots && !kids {
                    ops.push((x, y, true));
                } else if kids && !roots {
                    ops.push((x, y, false));
                }
            }
        }
        if ops.is_empty() {
            return (p, trace);
        }
        let (x, y, rule_i) = ops[rng.gen_range(0..ops.len())];
        let ((rx, lx, sx), (ry, ly, sy)) = (carets[x], carets[y]);
        if rule_i {
            p.union(lx, ly);
            p.union(sx, sy);
        } else {
            p.union(rx, ry);
        }
        trace.push(p.count());
    }
}

/// The core graph; vertex 0 is the class of the roots and the others are
/// numbered in breadth-first order, following 0-edges before 1-edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreGraph {
    succ: Vec<[Option<usize>; 2]>,
}

impl CoreGraph {
    pub fn from_partition(forest: &Forest, rel: &Partition) -> Result<CoreGraph> {
        if forest.is_empty() {
            return Ok(CoreGraph { succ: Vec::new() });
        }
        let labels = rel.labels();
        let mut edges: HashMap<usize, [Option<usize>; 2]> = HashMap::new();
        for (u, node) in forest.nodes.iter().enumerate() {
            if let Some((l, r)) = node.children {
                let e = edges.entry(labels[u]).or_insert([None, None]);
                for (bit, child) in [(0usize, l), (1, r)] {
                    match e[bit] {
                        Some(c) if c != labels[child] => {
                            return Err(Error::NonDeterministicCore { class: labels[u], label: bit as u8 });
                        }
                        _ => e[bit] = Some(labels[child]),
                    }
                }
            }
        }
        let root = labels[forest.roots[0]];
        let mut names: HashMap<usize, usize> = HashMap::new();
        let mut order = vec![root];
        names.insert(root, 0);
        let mut queue = VecDeque::from([root]);
        while let Some(c) = queue.pop_front() {
            if let Some(e) = edges.get(&c) {
                for t in e.iter().flatten() {
                    if !names.contains_key(t) {
                        names.insert(*t, order.len());
                        order.push(*t);
                        queue.push_back(*t);
                    }
                }
            }
        }
        let succ = order
            .iter()
            .map(|c| match edges.get(c) {
                Some(e) => [e[0].map(|t| names[&t]), e[1].map(|t| names[&t])],
                None => [None, None],
            })
            .collect();
        Ok(CoreGraph { succ })
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn edge(&self, v: usize, bit: usize) -> Option<usize> {
        self.succ.get(v).and_then(|e| e[bit])
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph core {\n");
        for v in 0..self.len() {
            let _ = writeln!(s, "  {v};");
        }
        for v in 0..self.len() {
            for bit in 0..2 {
                if let Some(t) = self.succ[v][bit] {
                    let _ = writeln!(s, "  {v} -> {t} [label=\"{bit}\"];");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// True iff `g` is the four-vertex criterion graph: the root has a 0-edge
/// to a vertex with a 0-loop and a 1-edge to a vertex with a 1-loop, and
/// the remaining edges of those two lead to a sink with both loops.
pub fn is_generation_graph(g: &CoreGraph) -> bool {
    if g.len() != 4 {
        return false;
    }
    let (Some(left), Some(right)) = (g.edge(0, 0), g.edge(0, 1)) else {
        return false;
    };
    let Some(sink) = g.edge(left, 1) else {
        return false;
    };
    let distinct = [0, left, right, sink];
    (0..4).all(|i| (i + 1..4).all(|j| distinct[i] != distinct[j]))
        && g.edge(left, 0) == Some(left)
        && g.edge(right, 1) == Some(right)
        && g.edge(right, 0) == Some(sink)
        && g.edge(sink, 0) == Some(sink)
        && g.edge(sink, 1) == Some(sink)
}

#[derive(Debug, Clone)]
pub struct CoreReport {
    pub forest: Forest,
    pub initial: Partition,
    pub fixpoint: Partition,
    pub graph: CoreGraph,
    pub warnings: Vec<String>,
}

pub fn build_core(pairs: &[TreePair]) -> Result<CoreReport> {
    let (forest, warnings) = Forest::from_pairs(pairs)?;
    let initial = initial_relation(&forest);
    let fixpoint = coarsen(&forest, &initial);
    let graph = CoreGraph::from_partition(&forest, &fixpoint)?;
    Ok(CoreReport { forest, initial, fixpoint, graph, warnings })
}

pub fn build_core_of_maps(gens: &[PLMap]) -> Result<CoreReport> {
    for (i, g) in gens.iter().enumerate() {
        if !g.fixes_zero() {
            return Err(Error::precondition(format!("generator {} does not fix 0", i + 1)));
        }
    }
    let pairs: Vec<TreePair> = gens.iter().map(TreePair::from_plmap).collect();
    build_core(&pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupcalc::{x0, x1};
    use rand::SeedableRng;

    fn tp(s: &str) -> TreePair {
        s.parse().unwrap()
    }

    #[test]
    fn identity_core() {
        let r = build_core(&[TreePair::identity()]).unwrap();
        assert_eq!(r.initial.count(), 1);
        assert_eq!(r.fixpoint.count(), 1);
        assert_eq!(r.graph.len(), 1);
        assert_eq!(r.graph.to_dot(), "digraph core {\n  0;\n}\n");
        assert!(!is_generation_graph(&r.graph));
    }

    #[test]
    fn x0_initial_classes() {
        let r = build_core(&[tp("(00,01,1)->(0,10,11)")]).unwrap();
        assert_eq!(r.initial.count(), 6);
    }

    #[test]
    fn standard_generators_give_criterion_graph() {
        let r = build_core_of_maps(&[x0(), x1()]).unwrap();
        assert!(is_generation_graph(&r.graph));
        assert!(!is_generation_graph(&build_core_of_maps(&[x0()]).unwrap().graph));
        assert!(!is_generation_graph(&build_core_of_maps(&[x1()]).unwrap().graph));
    }

    #[test]
    fn unreduced_input_warns() {
        let r = build_core(&[tp("(000,001,01,1)->(00,01,10,11)")]).unwrap();
        assert_eq!(r.warnings.len(), 1);
        assert!(build_core(&[tp("(0,1)->(1,0)")]).is_err());
    }

    #[test]
    fn schedules_reach_the_same_fixpoint() {
        let (forest, _) = Forest::from_pairs(&[TreePair::from_plmap(&x0()), TreePair::from_plmap(&x1())]).unwrap();
        let init = initial_relation(&forest);
        let expected = coarsen(&forest, &init);
        for seed in 0..5 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let (p, trace) = coarsen_scheduled(&forest, &init, &mut rng);
            assert_eq!(p, expected);
            assert!(trace.windows(2).all(|w| w[1] < w[0]));
        }
    }
}
