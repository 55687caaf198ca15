//! Line-based project configuration.
//!
//! ```text
//! # trefoil as an amalgam
//! [group A]
//! kind=abelian
//! rank=1
//! names=a
//!
//! [subgroup A2 in A]
//! generators=a^2
//!
//! [graph]
//! vertices=A:A,B:B
//! edge e: A -> B subgroup=B3 reverse_subgroup=A2 iso=y1->y1
//! tree=e
//!
//! [coset H]
//! edge=e
//! mode=async
//!
//! [params]
//! radius=6
//! ```
//!
//! Keys hold one value each and values run to the end of the line, so words
//! may contain spaces. `#` starts a comment.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use crate::backend::{
    parse_table, AbelianBackend, AbelianSubgroup, FiniteBackend, FiniteSubgroup, FreeBackend, FreeCyclicSubgroup,
    GroupBackend, SubgroupContext, TrivialSubgroup,
};
use crate::coset::Mode;
use crate::error::{Error, Result};
use crate::gog::{maximal_tree, tree_from_edges, EdgeSpec, GraphOfGroups, SpanningTree};
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    Abelian { rank: usize, torsion: Vec<u64> },
    Free { rank: usize },
    Finite { table: PathBuf, generators: Vec<(String, usize)> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDecl {
    pub name: String,
    pub kind: GroupKind,
    pub names: Option<Vec<String>>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupDecl {
    pub name: String,
    pub group: String,
    pub generators: Vec<String>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDecl {
    pub name: String,
    pub from: String,
    pub to: String,
    pub subgroup: String,
    pub reverse_subgroup: String,
    pub iso: Vec<(String, String)>,
    pub reverse: Option<String>,
    pub reverse_iso: Option<Vec<(String, String)>>,
    pub line: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphDecl {
    pub vertices: Vec<(String, String)>,
    pub edges: Vec<EdgeDecl>,
    pub tree: Option<Vec<String>>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CosetTarget {
    /// A declared subgroup of a component group.
    Subgroup(String),
    /// The edge group `G_e` inside the fundamental group.
    Edge(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetDecl {
    pub name: String,
    pub target: CosetTarget,
    pub mode: Mode,
    pub line: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProjectConfig {
    pub source: String,
    pub base_dir: PathBuf,
    pub groups: Vec<GroupDecl>,
    pub subgroups: Vec<SubgroupDecl>,
    pub graph: Option<GraphDecl>,
    pub cosets: Vec<CosetDecl>,
    /// `[params]` entries with their line numbers.
    pub params: BTreeMap<String, (String, usize)>,
}

enum Section {
    None,
    Group(usize),
    Subgroup(usize),
    Graph,
    Coset(usize),
    Params,
}

/// Keys recognised on an `edge` line.
const EDGE_KEYS: [&str; 5] = ["subgroup", "reverse_subgroup", "iso", "reverse", "reverse_iso"];

impl ProjectConfig {
    pub fn load(path: &Path) -> std::io::Result<std::result::Result<Self, Error>> {
        let text = fs::read_to_string(path)?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self::parse(&text, &path.display().to_string(), &dir))
    }

    /// `source` names the input in diagnostics; finite tables are resolved
    /// against `base_dir`.
    pub fn parse(text: &str, source: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg = ProjectConfig {
            source: source.to_string(),
            base_dir: base_dir.to_path_buf(),
            ..Default::default()
        };
        // raw group keys, resolved into a GroupKind when the section closes
        let mut group_keys: Vec<BTreeMap<String, (String, usize)>> = Vec::new();
        let mut coset_keys: Vec<BTreeMap<String, (String, usize)>> = Vec::new();
        let mut section = Section::None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |m: String| parse_error(source, line, m);
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(header) = content.strip_prefix('[') {
                let header = header
                    .strip_suffix(']')
                    .ok_or_else(|| err("unterminated section header".into()))?;
                let parts: Vec<&str> = header.split_whitespace().collect();
                section = match parts.as_slice() {
                    ["group", name] => {
                        cfg.groups.push(GroupDecl {
                            name: name.to_string(),
                            kind: GroupKind::Free { rank: 0 },
                            names: None,
                            line,
                        });
                        group_keys.push(BTreeMap::new());
                        Section::Group(cfg.groups.len() - 1)
                    }
                    ["subgroup", name, "in", group] => {
                        cfg.subgroups.push(SubgroupDecl {
                            name: name.to_string(),
                            group: group.to_string(),
                            generators: Vec::new(),
                            line,
                        });
                        Section::Subgroup(cfg.subgroups.len() - 1)
                    }
                    ["graph"] => {
                        if cfg.graph.is_some() {
                            return Err(err("second [graph] section".into()));
                        }
                        cfg.graph = Some(GraphDecl {
                            line,
                            ..Default::default()
                        });
                        Section::Graph
                    }
                    ["coset", name] => {
                        cfg.cosets.push(CosetDecl {
                            name: name.to_string(),
                            target: CosetTarget::Subgroup(String::new()),
                            mode: Mode::Async,
                            line,
                        });
                        coset_keys.push(BTreeMap::new());
                        Section::Coset(cfg.cosets.len() - 1)
                    }
                    ["params"] => Section::Params,
                    _ => return Err(err(format!("unknown section `[{header}]`"))),
                };
                continue;
            }
            if let (Section::Graph, Some(rest)) = (&section, content.strip_prefix("edge ")) {
                let edge = parse_edge(rest, line).map_err(err)?;
                cfg.graph.as_mut().expect("in graph section").edges.push(edge);
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| err(format!("expected key=value, found `{content}`")))?;
            match &section {
                Section::None => return Err(err("key outside any section".into())),
                Section::Group(g) => insert_key(&mut group_keys[*g], key, value, line).map_err(err)?,
                Section::Coset(c) => insert_key(&mut coset_keys[*c], key, value, line).map_err(err)?,
                Section::Params => insert_key(&mut cfg.params, key, value, line).map_err(err)?,
                Section::Subgroup(s) => match key {
                    "generators" => {
                        cfg.subgroups[*s].generators = value
                            .split(';')
                            .map(str::trim)
                            .filter(|w| !w.is_empty())
                            .map(String::from)
                            .collect()
                    }
                    _ => return Err(err(format!("unknown subgroup key `{key}`"))),
                },
                Section::Graph => {
                    let graph = cfg.graph.as_mut().expect("in graph section");
                    match key {
                        "vertices" => {
                            for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                                let (v, g) = item
                                    .split_once(':')
                                    .ok_or_else(|| err(format!("vertex `{item}` is not <vertex>:<group>")))?;
                                graph.vertices.push((v.trim().to_string(), g.trim().to_string()));
                            }
                        }
                        "tree" => {
                            graph.tree = Some(
                                value
                                    .split(',')
                                    .map(str::trim)
                                    .filter(|s| !s.is_empty())
                                    .map(String::from)
                                    .collect(),
                            )
                        }
                        _ => return Err(err(format!("unknown graph key `{key}`"))),
                    }
                }
            }
        }
        for (g, keys) in group_keys.iter().enumerate() {
            let (kind, names) = group_kind(keys).map_err(|(l, m)| cfg.error(l.unwrap_or(cfg.groups[g].line), m))?;
            cfg.groups[g].kind = kind;
            cfg.groups[g].names = names;
        }
        for (c, keys) in coset_keys.iter().enumerate() {
            let (target, mode) = coset_target(keys).map_err(|(l, m)| cfg.error(l.unwrap_or(cfg.cosets[c].line), m))?;
            cfg.cosets[c].target = target;
            cfg.cosets[c].mode = mode;
        }
        Ok(cfg)
    }

    fn error(&self, line: usize, message: String) -> Error {
        parse_error(&self.source, line, message)
    }

    /// A `[params]` value, or `None` when the key is absent.
    pub fn param<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.params.get(key) {
            None => Ok(None),
            Some((v, line)) => v
                .parse()
                .map(Some)
                .map_err(|_| self.error(*line, format!("cannot parse `{v}` for `{key}`"))),
        }
    }

    /// A comma-separated `[params]` list.
    pub fn param_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        match self.params.get(key) {
            None => Ok(None),
            Some((v, line)) => v
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<std::result::Result<Vec<T>, _>>()
                .map(Some)
                .map_err(|_| self.error(*line, format!("cannot parse `{v}` for `{key}`"))),
        }
    }
}

fn parse_error(source: &str, line: usize, message: String) -> Error {
    Error::Parse {
        context: source.to_string(),
        line,
        message,
    }
}

fn insert_key(
    map: &mut BTreeMap<String, (String, usize)>,
    key: &str,
    value: &str,
    line: usize,
) -> std::result::Result<(), String> {
    if map.insert(key.to_string(), (value.to_string(), line)).is_some() {
        return Err(format!("duplicate key `{key}`"));
    }
    Ok(())
}

type KeyError = (Option<usize>, String);

fn required<'a>(keys: &'a BTreeMap<String, (String, usize)>, key: &str) -> std::result::Result<&'a (String, usize), KeyError> {
    keys.get(key).ok_or((None, format!("missing key `{key}`")))
}

fn number<T: FromStr>(value: &(String, usize), key: &str) -> std::result::Result<T, KeyError> {
    value
        .0
        .trim()
        .parse()
        .map_err(|_| (Some(value.1), format!("cannot parse `{}` for `{key}`", value.0)))
}

fn group_kind(keys: &BTreeMap<String, (String, usize)>) -> std::result::Result<(GroupKind, Option<Vec<String>>), KeyError> {
    let allowed: &[&str] = match keys.get("kind").map(|k| k.0.as_str()) {
        Some("abelian") => &["kind", "rank", "torsion", "names"],
        Some("free") => &["kind", "rank", "names"],
        Some("finite") => &["kind", "table", "generators"],
        Some(other) => return Err((Some(keys["kind"].1), format!("unknown group kind `{other}`"))),
        None => return Err((None, "missing key `kind`".into())),
    };
    if let Some((k, (_, line))) = keys.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        return Err((Some(*line), format!("key `{k}` does not apply to this group kind")));
    }
    let names = keys
        .get("names")
        .map(|(v, _)| v.split(',').map(|s| s.trim().to_string()).collect());
    let kind = match keys["kind"].0.as_str() {
        "abelian" => {
            let rank = keys.get("rank").map_or(Ok(0), |v| number(v, "rank"))?;
            let torsion = match keys.get("torsion") {
                Some(v) if !v.0.is_empty() => v
                    .0
                    .split(',')
                    .map(|d| number(&(d.to_string(), v.1), "torsion"))
                    .collect::<std::result::Result<_, _>>()?,
                _ => Vec::new(),
            };
            GroupKind::Abelian { rank, torsion }
        }
        "free" => GroupKind::Free {
            rank: number(required(keys, "rank")?, "rank")?,
        },
        _ => {
            let table = PathBuf::from(&required(keys, "table")?.0);
            let mut generators = Vec::new();
            if let Some((v, line)) = keys.get("generators") {
                for item in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let (name, idx) = item
                        .split_once(':')
                        .ok_or((Some(*line), format!("generator `{item}` is not <name>:<index>")))?;
                    generators.push((name.trim().to_string(), number(&(idx.to_string(), *line), "generators")?));
                }
            }
            GroupKind::Finite { table, generators }
        }
    };
    Ok((kind, names))
}

fn coset_target(keys: &BTreeMap<String, (String, usize)>) -> std::result::Result<(CosetTarget, Mode), KeyError> {
    if let Some((k, (_, line))) = keys.iter().find(|(k, _)| !["subgroup", "edge", "mode"].contains(&k.as_str())) {
        return Err((Some(*line), format!("unknown coset key `{k}`")));
    }
    let target = match (keys.get("subgroup"), keys.get("edge")) {
        (Some((s, _)), None) => CosetTarget::Subgroup(s.clone()),
        (None, Some((e, _))) => CosetTarget::Edge(e.clone()),
        _ => return Err((None, "a coset declares exactly one of `subgroup` or `edge`".into())),
    };
    let mode = match keys.get("mode").map(|(m, l)| (m.as_str(), *l)) {
        None | Some(("async", _)) => Mode::Async,
        Some(("sync", _)) => Mode::Sync,
        Some((m, l)) => return Err((Some(l), format!("unknown mode `{m}`"))),
    };
    Ok((target, mode))
}

/// `e: A -> B subgroup=.. reverse_subgroup=.. iso=y1->w;..`
fn parse_edge(rest: &str, line: usize) -> std::result::Result<EdgeDecl, String> {
    let (name, rest) = rest.split_once(':').ok_or("edge line needs `<name>: <from> -> <to>`")?;
    let mut tokens = rest.split_whitespace();
    let (from, arrow, to) = (tokens.next(), tokens.next(), tokens.next());
    let (Some(from), Some("->"), Some(to)) = (from, arrow, to) else {
        return Err("edge line needs `<name>: <from> -> <to>`".into());
    };
    let mut values: BTreeMap<&str, String> = BTreeMap::new();
    let mut current: Option<&str> = None;
    for tok in tokens {
        let key = tok.split_once('=').map(|(k, _)| k).filter(|k| EDGE_KEYS.contains(k));
        if let Some(k) = key {
            if values.contains_key(k) {
                return Err(format!("duplicate key `{k}`"));
            }
            values.insert(k, tok[k.len() + 1..].to_string());
            current = Some(k);
        } else {
            let k = current.ok_or_else(|| format!("unexpected `{tok}` on edge line"))?;
            let v = values.get_mut(k).expect("current key");
            v.push(' ');
            v.push_str(tok);
        }
    }
    let take = |k: &str| values.get(k).cloned();
    let pairs = |s: String| -> std::result::Result<Vec<(String, String)>, String> {
        s.split(';')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| {
                p.split_once("->")
                    .map(|(y, w)| (y.trim().to_string(), w.trim().to_string()))
                    .ok_or_else(|| format!("iso entry `{p}` is not <generator>-><word>"))
            })
            .collect()
    };
    Ok(EdgeDecl {
        name: name.trim().to_string(),
        from: from.to_string(),
        to: to.to_string(),
        subgroup: take("subgroup").ok_or("edge line needs `subgroup=`")?,
        reverse_subgroup: take("reverse_subgroup").ok_or("edge line needs `reverse_subgroup=`")?,
        iso: pairs(take("iso").unwrap_or_default())?,
        reverse: take("reverse"),
        reverse_iso: take("reverse_iso").map(pairs).transpose()?,
        line,
    })
}

/// A built component group, keeping its concrete type for subgroups.
#[derive(Debug, Clone)]
pub enum GroupHandle {
    Abelian(Arc<AbelianBackend>),
    Free(Arc<FreeBackend>),
    Finite(Arc<FiniteBackend>),
}

impl GroupHandle {
    pub fn backend(&self) -> Arc<dyn GroupBackend> {
        match self {
            GroupHandle::Abelian(g) => g.clone(),
            GroupHandle::Free(g) => g.clone(),
            GroupHandle::Finite(g) => g.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BuiltSubgroup {
    pub name: String,
    pub group: String,
    pub context: Arc<dyn SubgroupContext>,
}

/// Everything a configuration describes, constructed.
#[derive(Debug, Clone)]
pub struct Project {
    pub config: ProjectConfig,
    pub groups: Vec<(String, GroupHandle)>,
    pub subgroups: Vec<BuiltSubgroup>,
    pub gog: Option<Arc<GraphOfGroups>>,
    pub tree: Option<SpanningTree>,
}

impl Project {
    pub fn build(config: ProjectConfig) -> Result<Self> {
        let mut groups: Vec<(String, GroupHandle)> = Vec::new();
        for g in &config.groups {
            if groups.iter().any(|(n, _)| *n == g.name) {
                return Err(config.error(g.line, format!("duplicate group `{}`", g.name)));
            }
            let handle = build_group(&config, g).map_err(|e| config.error(g.line, e.to_string()))?;
            groups.push((g.name.clone(), handle));
        }
        let mut subgroups: Vec<BuiltSubgroup> = Vec::new();
        for s in &config.subgroups {
            let at = |e: Error| config.error(s.line, e.to_string());
            if subgroups.iter().any(|b| b.name == s.name) {
                return Err(config.error(s.line, format!("duplicate subgroup `{}`", s.name)));
            }
            let handle = &groups
                .iter()
                .find(|(n, _)| *n == s.group)
                .ok_or_else(|| config.error(s.line, format!("unknown group `{}`", s.group)))?
                .1;
            let al = handle.backend().alphabet().clone();
            let gens: Vec<Word> = s.generators.iter().map(|w| al.parse(w)).collect::<Result<_>>().map_err(at)?;
            let context: Arc<dyn SubgroupContext> = match handle {
                _ if gens.is_empty() => Arc::new(TrivialSubgroup::new(handle.backend())),
                GroupHandle::Abelian(g) => Arc::new(AbelianSubgroup::new(g.clone(), gens).map_err(at)?),
                GroupHandle::Free(g) if gens.len() == 1 => {
                    Arc::new(FreeCyclicSubgroup::new(g.clone(), gens[0].clone()).map_err(at)?)
                }
                GroupHandle::Free(_) => {
                    return Err(config.error(s.line, "subgroups of free groups must be cyclic".into()))
                }
                GroupHandle::Finite(g) => Arc::new(FiniteSubgroup::new(g.clone(), gens).map_err(at)?),
            };
            subgroups.push(BuiltSubgroup {
                name: s.name.clone(),
                group: s.group.clone(),
                context,
            });
        }
        let (gog, tree) = match &config.graph {
            None => (None, None),
            Some(graph) => {
                let (gog, tree) = build_graph(&config, graph, &groups, &subgroups)?;
                (Some(gog), Some(tree))
            }
        };
        for c in &config.cosets {
            let known = match &c.target {
                CosetTarget::Subgroup(s) => subgroups.iter().any(|b| b.name == *s),
                CosetTarget::Edge(e) => gog.as_ref().is_some_and(|g| g.edge_index(e).is_some()),
            };
            if !known {
                return Err(config.error(c.line, format!("coset `{}` refers to an unknown subgroup or edge", c.name)));
            }
        }
        Ok(Project {
            config,
            groups,
            subgroups,
            gog,
            tree,
        })
    }

    pub fn group(&self, name: &str) -> Option<&GroupHandle> {
        self.groups.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    pub fn subgroup(&self, name: &str) -> Option<&BuiltSubgroup> {
        self.subgroups.iter().find(|s| s.name == name)
    }
}

fn build_group(config: &ProjectConfig, g: &GroupDecl) -> Result<GroupHandle> {
    Ok(match &g.kind {
        GroupKind::Abelian { rank, torsion } => GroupHandle::Abelian(Arc::new(match &g.names {
            Some(names) => AbelianBackend::with_names(*rank, torsion, names)?,
            None => AbelianBackend::new(*rank, torsion)?,
        })),
        GroupKind::Free { rank } => GroupHandle::Free(Arc::new(match &g.names {
            Some(names) if names.len() != *rank => {
                return Err(Error::InvalidGroup(format!("{} names for rank {rank}", names.len())))
            }
            Some(names) => FreeBackend::with_names(names)?,
            None => FreeBackend::new(*rank)?,
        })),
        GroupKind::Finite { table, generators } => {
            let path = config.base_dir.join(table);
            let text = fs::read_to_string(&path)
                .map_err(|e| Error::InvalidGroup(format!("cannot read {}: {e}", path.display())))?;
            GroupHandle::Finite(Arc::new(FiniteBackend::new(parse_table(&text)?, generators)?))
        }
    })
}

fn build_graph(
    config: &ProjectConfig,
    graph: &GraphDecl,
    groups: &[(String, GroupHandle)],
    subgroups: &[BuiltSubgroup],
) -> Result<(Arc<GraphOfGroups>, SpanningTree)> {
    let mut gog = GraphOfGroups::new();
    let mut vertex_group: Vec<&str> = Vec::new();
    for (v, g) in &graph.vertices {
        let handle = &groups
            .iter()
            .find(|(n, _)| n == g)
            .ok_or_else(|| config.error(graph.line, format!("vertex `{v}` uses unknown group `{g}`")))?
            .1;
        gog.add_vertex(v, handle.backend())
            .map_err(|e| config.error(graph.line, e.to_string()))?;
        vertex_group.push(g);
    }
    for e in &graph.edges {
        let at = |m: String| config.error(e.line, format!("edge `{}`: {m}", e.name));
        let vertex = |v: &str| gog.vertex_index(v).ok_or_else(|| at(format!("unknown vertex `{v}`")));
        let (from, to) = (vertex(&e.from)?, vertex(&e.to)?);
        let sub = |name: &str, v: usize| -> Result<&BuiltSubgroup> {
            let s = subgroups
                .iter()
                .find(|s| s.name == name)
                .ok_or_else(|| at(format!("unknown subgroup `{name}`")))?;
            if s.group != vertex_group[v] {
                return Err(at(format!(
                    "subgroup `{name}` lies in `{}`, not in the group of vertex `{}`",
                    s.group,
                    gog.vertex(v).name
                )));
            }
            Ok(s)
        };
        let (ge, gebar) = (sub(&e.subgroup, to)?, sub(&e.reverse_subgroup, from)?);
        let images = |pairs: &[(String, String)], src: &BuiltSubgroup, dst: &BuiltSubgroup| -> Result<Vec<Word>> {
            let ya = src.context.generators().alphabet();
            let yb = dst.context.generators().alphabet();
            let mut out: Vec<Option<Word>> = vec![None; ya.num_generators()];
            for (y, w) in pairs {
                let g = ya
                    .letter(y)
                    .filter(|&l| ya.is_positive(l))
                    .map(|l| ya.generator_of(l))
                    .ok_or_else(|| at(format!("`{y}` is not a generator of `{}`", src.name)))?;
                out[g] = Some(yb.parse(w).map_err(|err| at(err.to_string()))?);
            }
            out.into_iter()
                .enumerate()
                .map(|(g, w)| w.ok_or_else(|| at(format!("no image for {}", ya.generator_names()[g]))))
                .collect()
        };
        let iso = images(&e.iso, ge, gebar)?;
        let reverse_iso = e.reverse_iso.as_ref().map(|r| images(r, gebar, ge)).transpose()?;
        gog.add_edge(EdgeSpec {
            name: e.name.clone(),
            from,
            to,
            subgroup: ge.context.clone(),
            reverse_subgroup: gebar.context.clone(),
            iso,
            reverse_name: e.reverse.clone(),
            reverse_iso,
        })
        .map_err(|err| config.error(e.line, err.to_string()))?;
    }
    let tree = match &graph.tree {
        None => maximal_tree(&gog),
        Some(names) => names
            .iter()
            .map(|n| {
                gog.edge_index(n)
                    .ok_or_else(|| Error::Graph(format!("tree names unknown edge `{n}`")))
            })
            .collect::<Result<Vec<_>>>()
            .and_then(|edges| tree_from_edges(&gog, &edges)),
    }
    .map_err(|e| config.error(graph.line, e.to_string()))?;
    Ok((Arc::new(gog), tree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gog::validate;

    const TREFOIL: &str = "\
# a^2 = b^3
[group A]
kind=abelian
rank=1
names=a

[group B]
kind=abelian
rank=1
names=b

[subgroup A2 in A]
generators=a^2

[subgroup B3 in B]
generators=b^3

[graph]
vertices=A:A,B:B
edge e: A -> B subgroup=B3 reverse_subgroup=A2 iso=y1->y1

[coset H]
edge=e

[params]
radius=6
radii=3, 4, 5
";

    fn parse(text: &str) -> Result<ProjectConfig> {
        ProjectConfig::parse(text, "test.gog", Path::new("."))
    }

    fn parse_err_line(text: &str) -> usize {
        match parse(text).and_then(Project::build) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn trefoil_round_trip() {
        let cfg = parse(TREFOIL).unwrap();
        assert_eq!(cfg.groups.len(), 2);
        assert_eq!(cfg.groups[0].kind, GroupKind::Abelian { rank: 1, torsion: vec![] });
        assert_eq!(cfg.param::<usize>("radius").unwrap(), Some(6));
        assert_eq!(cfg.param_list::<usize>("radii").unwrap(), Some(vec![3, 4, 5]));
        assert_eq!(cfg.cosets[0].target, CosetTarget::Edge("e".into()));
        let edge = &cfg.graph.as_ref().unwrap().edges[0];
        assert_eq!(edge.iso, vec![("y1".to_string(), "y1".to_string())]);
        let p = Project::build(cfg).unwrap();
        let gog = p.gog.unwrap();
        assert!(validate(&gog).passed());
        assert_eq!(gog.edge(1).name, "e_bar");
    }

    #[test]
    fn edge_words_with_spaces() {
        let e = parse_edge("f: V -> V subgroup=S reverse_subgroup=T iso=y1->y1 y2^-1;y2->y2 reverse=g", 3).unwrap();
        assert_eq!(e.iso[0], ("y1".to_string(), "y1 y2^-1".to_string()));
        assert_eq!(e.reverse.as_deref(), Some("g"));
        assert!(parse_edge("f V -> V", 1).is_err());
        assert!(parse_edge("f: V => V subgroup=S reverse_subgroup=T", 1).is_err());
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(parse_err_line("[group A]\nkind=cyclic\n"), 2);
        assert_eq!(parse_err_line("\n[bogus]\n"), 2);
        assert_eq!(parse_err_line("rank=1\n"), 1);
        assert_eq!(parse_err_line("[group A]\nkind=free\nrank=x\n"), 3);
        assert_eq!(parse_err_line("[group A]\nkind=free\nrank=1\n[subgroup S in Q]\ngenerators=a\n"), 4);
        let broken = TREFOIL.replace("reverse_subgroup=A2", "reverse_subgroup=B3");
        assert_eq!(parse_err_line(&broken), 20);
    }

    #[test]
    fn broken_iso_names_the_edge() {
        let broken = TREFOIL.replace("iso=y1->y1", "iso=y1->y1^2");
        let err = parse(&broken).and_then(Project::build).unwrap_err();
        assert!(err.to_string().contains("edge `e`"), "{err}");
    }

    #[test]
    fn component_only_config() {
        let text = "[group Z2]\nkind=abelian\nrank=2\n[subgroup H in Z2]\ngenerators=x1 x2\n[coset C]\nsubgroup=H\nmode=sync\n";
        let p = Project::build(parse(text).unwrap()).unwrap();
        assert!(p.gog.is_none());
        assert_eq!(p.config.cosets[0].mode, Mode::Sync);
        assert_eq!(p.subgroup("H").unwrap().context.generators().len(), 1);
    }
}
