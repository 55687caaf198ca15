//! Graphs of groups: a finite connected graph with an edge involution, a
//! group at every vertex, an edge subgroup of the terminal vertex group for
//! every directed edge, and the edge isomorphisms between them.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::backend::{GroupBackend, SubgroupContext};
use crate::error::{Error, Result};
use crate::word::Word;

#[derive(Debug, Clone)]
pub struct Vertex {
    pub name: String,
    pub group: Arc<dyn GroupBackend>,
}

/// A directed edge `e` with `ι(e) = from`, `τ(e) = to`; the subgroup `G_e`
/// lives in `G_τ(e)` and `iso[j]` is `φ_e(y_j)` as a word over `Y_ē±`.
#[derive(Debug, Clone)]
pub struct Edge {
    pub name: String,
    pub from: usize,
    pub to: usize,
    pub reverse: usize,
    /// True for the direction named first in the configuration.
    pub forward: bool,
    pub subgroup: Arc<dyn SubgroupContext>,
    pub iso: Vec<Word>,
}

/// Declaration of an edge pair.
#[derive(Debug, Clone)]
pub struct EdgeSpec {
    pub name: String,
    pub from: usize,
    pub to: usize,
    /// `G_e ≤ G_to`.
    pub subgroup: Arc<dyn SubgroupContext>,
    /// `G_ē ≤ G_from`.
    pub reverse_subgroup: Arc<dyn SubgroupContext>,
    /// `φ_e` on generators, words over `Y_ē±`.
    pub iso: Vec<Word>,
    pub reverse_name: Option<String>,
    /// `φ_ē` on generators; derived from `iso` when absent.
    pub reverse_iso: Option<Vec<Word>>,
}

#[derive(Debug, Clone, Default)]
pub struct GraphOfGroups {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

/// Search depth when inverting an edge isomorphism.
const INVERSE_SEARCH: usize = 6;

impl GraphOfGroups {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: &str, group: Arc<dyn GroupBackend>) -> Result<usize> {
        if self.vertex_index(name).is_some() {
            return Err(Error::Graph(format!("duplicate vertex `{name}`")));
        }
        self.vertices.push(Vertex {
            name: name.to_string(),
            group,
        });
        Ok(self.vertices.len() - 1)
    }

    /// Adds `e` and `ē`; returns the index of `e` (`ē` follows it).
    pub fn add_edge(&mut self, spec: EdgeSpec) -> Result<usize> {
        let n = self.vertices.len();
        if spec.from >= n || spec.to >= n {
            return Err(Error::Graph(format!("edge `{}` names a missing vertex", spec.name)));
        }
        let reverse_name = spec
            .reverse_name
            .clone()
            .unwrap_or_else(|| format!("{}_bar", spec.name));
        for name in [&spec.name, &reverse_name] {
            if self.edge_index(name).is_some() || spec.name == reverse_name {
                return Err(Error::Graph(format!("duplicate edge `{name}`")));
            }
        }
        let reverse_iso = match &spec.reverse_iso {
            Some(r) => r.clone(),
            None => invert_iso(&spec, &self.vertices[spec.from].group)?,
        };
        let e = self.edges.len();
        self.edges.push(Edge {
            name: spec.name.clone(),
            from: spec.from,
            to: spec.to,
            reverse: e + 1,
            forward: true,
            subgroup: spec.subgroup.clone(),
            iso: spec.iso.clone(),
        });
        self.edges.push(Edge {
            name: reverse_name,
            from: spec.to,
            to: spec.from,
            reverse: e,
            forward: false,
            subgroup: spec.reverse_subgroup.clone(),
            iso: reverse_iso,
        });
        Ok(e)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    /// `φ_e(h)` for `h` over `Y_e±`, as a word over `Y_ē±`.
    pub fn iso_y(&self, e: usize, h: &Word) -> Word {
        let edge = &self.edges[e];
        apply_iso(&edge.iso, edge.subgroup.generators().alphabet(), self.target_y(e), h)
    }

    fn target_y(&self, e: usize) -> &crate::word::Alphabet {
        self.edges[self.edges[e].reverse].subgroup.generators().alphabet()
    }

    /// `φ_e(h)` for `h` over `Y_e±`, as a word over `X_ι(e)`.
    pub fn iso_apply(&self, e: usize, h: &Word) -> Word {
        let edge = &self.edges[e];
        let rev = &self.edges[edge.reverse];
        let group = &self.vertices[edge.from].group;
        rev.subgroup.generators().evaluate(group.alphabet(), &self.iso_y(e, h))
    }
}

fn apply_iso(
    images: &[Word],
    source: &crate::word::Alphabet,
    target: &crate::word::Alphabet,
    h: &Word,
) -> Word {
    let mut out = Word::empty();
    for l in h.iter() {
        let im = &images[source.generator_of(l)];
        if source.is_positive(l) {
            out.extend_from(im);
        } else {
            out.extend_from(&target.invert(im));
        }
    }
    out
}

/// Find `φ_ē` on generators by searching short `Y_e` words.
fn invert_iso(spec: &EdgeSpec, from_group: &Arc<dyn GroupBackend>) -> Result<Vec<Word>> {
    let ye = spec.subgroup.generators();
    let ybar = spec.reverse_subgroup.generators();
    if spec.iso.len() != ye.len() {
        return Err(Error::Graph(format!(
            "edge `{}`: iso gives {} images for {} generators",
            spec.name,
            spec.iso.len(),
            ye.len()
        )));
    }
    let xa = from_group.alphabet();
    let mut table: HashMap<Word, Word> = HashMap::new();
    for w in ye.alphabet().all_words(INVERSE_SEARCH) {
        let img = apply_iso(&spec.iso, ye.alphabet(), ybar.alphabet(), &w);
        let key = from_group.canonical(&ybar.evaluate(xa, &img));
        table.entry(key).or_insert(w);
    }
    ybar.words()
        .iter()
        .map(|target| {
            table.get(&from_group.canonical(target)).cloned().ok_or_else(|| {
                Error::Graph(format!(
                    "edge `{}`: cannot invert the isomorphism; declare reverse_iso",
                    spec.name
                ))
            })
        })
        .collect()
}

/// Problems found by [`validate`], one line each.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "status={}", if self.passed() { "pass" } else { "fail" })?;
        writeln!(f, "failures={}", self.failures.len())?;
        for line in &self.failures {
            writeln!(f, "failure {line}")?;
        }
        Ok(())
    }
}

/// Homomorphism checks on `Y_e` words up to this length.
const HOM_CHECK: usize = 4;

pub fn validate(gog: &GraphOfGroups) -> ValidationReport {
    let mut failures = Vec::new();
    if gog.vertices.is_empty() {
        failures.push("graph has no vertices".to_string());
    } else if let Err(e) = maximal_tree(gog) {
        failures.push(e.to_string());
    }
    for (i, e) in gog.edges.iter().enumerate() {
        let to = &gog.vertices[e.to];
        let from = &gog.vertices[e.from];
        let rev = &gog.edges[e.reverse];
        if e.subgroup.parent().alphabet() != to.group.alphabet() {
            failures.push(format!("edge {}: subgroup is not inside the group of vertex {}", e.name, to.name));
            continue;
        }
        let ye = e.subgroup.generators();
        let ybar = rev.subgroup.generators();
        if e.iso.len() != ye.len() {
            failures.push(format!("edge {}: iso gives {} images for {} generators", e.name, e.iso.len(), ye.len()));
            continue;
        }
        if let Some(w) = e.iso.iter().find(|w| !ybar.alphabet().contains_word(w)) {
            failures.push(format!("edge {}: image {:?} is not a word over the reverse subgroup generators", e.name, w));
            continue;
        }
        if rev.iso.len() != ybar.len() || rev.iso.iter().any(|w| !ye.alphabet().contains_word(w)) {
            // reported on the reverse edge itself
            continue;
        }
        for j in 0..ye.len() {
            let y = Word::single(ye.alphabet().generator(j));
            let back = gog.iso_y(rev.reverse, &gog.iso_y(i, &y));
            let lhs = ye.evaluate(to.group.alphabet(), &back);
            if !to.group.equal(&lhs, &ye.words()[j]) {
                failures.push(format!(
                    "edge {}: φ_{}∘φ_{} ≠ id on {}",
                    e.name,
                    rev.name,
                    e.name,
                    ye.alphabet().name(ye.alphabet().generator(j))
                ));
            }
        }
        let mut seen: HashMap<Word, Word> = HashMap::new();
        for w in ye.alphabet().all_words(HOM_CHECK) {
            let src = to.group.canonical(&ye.evaluate(to.group.alphabet(), &w));
            let img = from.group.canonical(&gog.iso_apply(i, &w));
            if let Some(prev) = seen.get(&src) {
                if *prev != img {
                    failures.push(format!("edge {}: φ_{} is not a homomorphism", e.name, e.name));
                    break;
                }
            } else {
                seen.insert(src, img);
            }
        }
    }
    ValidationReport { failures }
}

/// A maximal tree, closed under edge reversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    root: usize,
    in_tree: Vec<bool>,
    parent_edge: Vec<Option<usize>>,
    depth: Vec<usize>,
}

impl SpanningTree {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn contains(&self, e: usize) -> bool {
        self.in_tree[e]
    }

    /// Tree edges in index order (both directions).
    pub fn edges(&self) -> Vec<usize> {
        (0..self.in_tree.len()).filter(|&e| self.in_tree[e]).collect()
    }

    /// Directed edges of the unique reduced tree path.
    pub fn path(&self, gog: &GraphOfGroups, from: usize, to: usize) -> Vec<usize> {
        let (mut a, mut b) = (from, to);
        let mut up = Vec::new();
        let mut down = Vec::new();
        while self.depth[a] > self.depth[b] {
            let e = self.parent_edge[a].expect("non-root has a parent");
            up.push(gog.edges[e].reverse);
            a = gog.edges[e].from;
        }
        while self.depth[b] > self.depth[a] {
            let e = self.parent_edge[b].expect("non-root has a parent");
            down.push(e);
            b = gog.edges[e].from;
        }
        while a != b {
            let ea = self.parent_edge[a].expect("non-root has a parent");
            let eb = self.parent_edge[b].expect("non-root has a parent");
            up.push(gog.edges[ea].reverse);
            down.push(eb);
            a = gog.edges[ea].from;
            b = gog.edges[eb].from;
        }
        down.reverse();
        up.extend(down);
        up
    }
}

/// Breadth-first tree from the least-named vertex, edges in index order.
pub fn maximal_tree(gog: &GraphOfGroups) -> Result<SpanningTree> {
    let n = gog.vertices.len();
    let root = (0..n)
        .min_by(|&a, &b| gog.vertices[a].name.cmp(&gog.vertices[b].name))
        .ok_or_else(|| Error::Graph("graph has no vertices".into()))?;
    let mut in_tree = vec![false; gog.edges.len()];
    let mut parent_edge = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for (i, e) in gog.edges.iter().enumerate() {
            if e.from == u && depth[e.to] == usize::MAX {
                depth[e.to] = depth[u] + 1;
                parent_edge[e.to] = Some(i);
                in_tree[i] = true;
                in_tree[e.reverse] = true;
                queue.push_back(e.to);
            }
        }
    }
    if let Some(v) = depth.iter().position(|&d| d == usize::MAX) {
        return Err(Error::Graph(format!(
            "graph is disconnected: vertex {} is unreachable",
            gog.vertices[v].name
        )));
    }
    Ok(SpanningTree {
        root,
        in_tree,
        parent_edge,
        depth,
    })
}

/// The tree formed by the given edges (either direction may be named).
pub fn tree_from_edges(gog: &GraphOfGroups, edges: &[usize]) -> Result<SpanningTree> {
    let n = gog.vertices.len();
    let mut in_tree = vec![false; gog.edges.len()];
    for &e in edges {
        in_tree[e] = true;
        in_tree[gog.edges[e].reverse] = true;
    }
    let root = (0..n)
        .min_by(|&a, &b| gog.vertices[a].name.cmp(&gog.vertices[b].name))
        .ok_or_else(|| Error::Graph("graph has no vertices".into()))?;
    let mut parent_edge = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for (i, e) in gog.edges.iter().enumerate() {
            if in_tree[i] && e.from == u && Some(e.reverse) != parent_edge[u] {
                if depth[e.to] != usize::MAX {
                    return Err(Error::Graph(format!("tree edges contain a cycle through {}", e.name)));
                }
                depth[e.to] = depth[u] + 1;
                parent_edge[e.to] = Some(i);
                queue.push_back(e.to);
            }
        }
    }
    if let Some(v) = depth.iter().position(|&d| d == usize::MAX) {
        return Err(Error::Graph(format!(
            "tree does not span: vertex {} is unreachable",
            gog.vertices[v].name
        )));
    }
    Ok(SpanningTree {
        root,
        in_tree,
        parent_edge,
        depth,
    })
}
