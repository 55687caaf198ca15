//! Normal forms for the fundamental group of a graph of groups relative to a
//! maximal tree: inflation and deflation of words, alternating path words,
//! pinch reduction, the right-to-left cascade and the Higgins automaton.

mod automaton;
mod cascade;
mod group;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fsa::Language;
use crate::gog::{maximal_tree, GraphOfGroups, SpanningTree};
use crate::word::{Alphabet, Letter, Word};

pub use cascade::{BaseMode, CascadeStep, CascadeTrace};
pub use group::{Pi1Coset, Pi1Group};

/// What a letter of the inflated alphabet stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    /// A letter of `X_v`, by vertex and local letter.
    Vertex(usize, Letter),
    /// The stable letter of a directed edge (`s_ē` is the inverse of `s_e`).
    Stable(usize),
}

/// `u₀ s_{e₁} u₁ ⋯ s_{e_k} u_k` with segments over the local vertex alphabets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InflatedWord {
    pub base: usize,
    pub u0: Word,
    pub path: Vec<(usize, Word)>,
}

impl InflatedWord {
    pub fn trivial(base: usize) -> Self {
        InflatedWord {
            base,
            u0: Word::empty(),
            path: Vec::new(),
        }
    }

    pub fn end_vertex(&self, gog: &GraphOfGroups) -> usize {
        self.path.last().map_or(self.base, |&(e, _)| gog.edge(e).to)
    }

    fn segment_mut(&mut self, i: usize) -> &mut Word {
        if i == 0 {
            &mut self.u0
        } else {
            &mut self.path[i - 1].1
        }
    }
}

/// A graph of groups together with a maximal tree and the alphabets of its
/// fundamental group.
#[derive(Debug)]
pub struct Pi1 {
    gog: Arc<GraphOfGroups>,
    tree: SpanningTree,
    hat: Alphabet,
    deflated: Alphabet,
    hat_symbols: Vec<Symbol>,
    deflated_symbols: Vec<Symbol>,
    /// Inflated letter of each (vertex, local letter).
    hat_vertex: Vec<Vec<Letter>>,
    hat_stable: Vec<Letter>,
    /// Deflated image of each inflated letter.
    deflate_map: Vec<Option<Letter>>,
    hat_short: Vec<String>,
    deflated_short: Vec<String>,
    vertex_languages: Vec<Language>,
    edge_languages: Vec<Language>,
}

impl Pi1 {
    pub fn new(gog: Arc<GraphOfGroups>, tree: SpanningTree) -> Result<Self> {
        let mut hat_gens: Vec<(String, bool)> = Vec::new();
        let mut hat_owner: Vec<(usize, usize)> = Vec::new(); // (vertex, generator) or (usize::MAX, edge)
        for (v, vert) in gog.vertices().iter().enumerate() {
            let al = vert.group.alphabet();
            for g in 0..al.num_generators() {
                let name = format!("{}.{}", vert.name, al.generator_names()[g]);
                hat_gens.push((name, al.is_self_inverse(al.generator(g))));
                hat_owner.push((v, g));
            }
        }
        let vertex_gens = hat_gens.len();
        for (e, edge) in gog.edges().iter().enumerate() {
            if edge.forward {
                hat_gens.push((format!("s_{}", edge.name), false));
                hat_owner.push((usize::MAX, e));
            }
        }
        let spec: Vec<(&str, bool)> = hat_gens.iter().map(|(n, s)| (n.as_str(), *s)).collect();
        let hat = Alphabet::with_involutions(&spec)?;
        let keep: Vec<usize> = (0..hat_gens.len())
            .filter(|&g| g < vertex_gens || !tree.contains(hat_owner[g].1))
            .collect();
        let dspec: Vec<(&str, bool)> = keep.iter().map(|&g| spec[g]).collect();
        let deflated = Alphabet::with_involutions(&dspec)?;

        let symbol_of = |al: &Alphabet, l: Letter, owner: (usize, usize)| -> Symbol {
            let positive = al.is_positive(l);
            if owner.0 == usize::MAX {
                let e = owner.1;
                Symbol::Stable(if positive { e } else { gog.edge(e).reverse })
            } else {
                let (v, g) = owner;
                let local = gog.vertex(v).group.alphabet();
                let pl = local.generator(g);
                Symbol::Vertex(v, if positive { pl } else { local.inverse(pl) })
            }
        };
        let hat_symbols: Vec<Symbol> = hat
            .letters()
            .map(|l| symbol_of(&hat, l, hat_owner[hat.generator_of(l)]))
            .collect();
        let deflated_symbols: Vec<Symbol> = deflated
            .letters()
            .map(|l| symbol_of(&deflated, l, hat_owner[keep[deflated.generator_of(l)]]))
            .collect();

        let mut hat_vertex: Vec<Vec<Letter>> = gog
            .vertices()
            .iter()
            .map(|v| vec![Letter(0); v.group.alphabet().size()])
            .collect();
        let mut hat_stable = vec![Letter(0); gog.edges().len()];
        for l in hat.letters() {
            match hat_symbols[l.index()] {
                Symbol::Vertex(v, local) => hat_vertex[v][local.index()] = l,
                Symbol::Stable(e) => hat_stable[e] = l,
            }
        }
        let deflate_map: Vec<Option<Letter>> = hat_symbols
            .iter()
            .map(|s| deflated_symbols.iter().position(|d| d == s).map(|i| Letter(i as u32)))
            .collect();

        let vertex_languages = gog.vertices().iter().map(|v| v.group.canonical_language()).collect();
        let edge_languages = gog.edges().iter().map(|e| e.subgroup.coset_language()).collect();
        Ok(Pi1 {
            hat_short: short_names(&hat),
            deflated_short: short_names(&deflated),
            gog,
            tree,
            hat,
            deflated,
            hat_symbols,
            deflated_symbols,
            hat_vertex,
            hat_stable,
            deflate_map,
            vertex_languages,
            edge_languages,
        })
    }

    /// Uses the breadth-first maximal tree.
    pub fn with_default_tree(gog: Arc<GraphOfGroups>) -> Result<Self> {
        let tree = maximal_tree(&gog)?;
        Self::new(gog, tree)
    }

    pub fn gog(&self) -> &Arc<GraphOfGroups> {
        &self.gog
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    /// The deflated alphabet `X`.
    pub fn alphabet(&self) -> &Alphabet {
        &self.deflated
    }

    /// The inflated alphabet `X̂`.
    pub fn inflated_alphabet(&self) -> &Alphabet {
        &self.hat
    }

    pub fn symbol(&self, l: Letter) -> Symbol {
        self.deflated_symbols[l.index()]
    }

    pub fn hat_symbol(&self, l: Letter) -> Symbol {
        self.hat_symbols[l.index()]
    }

    pub fn vertex_language(&self, v: usize) -> &Language {
        &self.vertex_languages[v]
    }

    pub fn edge_language(&self, e: usize) -> &Language {
        &self.edge_languages[e]
    }

    /// Drop the stable letters of tree edges.
    pub fn deflate(&self, w: &Word) -> Word {
        w.iter().filter_map(|l| self.deflate_map[l.index()]).collect()
    }

    /// Insert tree stable letters along tree paths so the result is an
    /// alternating path word starting at `start`.
    pub fn inflate(&self, w: &Word, start: usize) -> Result<Word> {
        self.check_vertex(start)?;
        if !self.deflated.contains_word(w) {
            return Err(Error::AlphabetMismatch("word is not over the deflated alphabet".into()));
        }
        let mut out = Word::empty();
        let mut cur = start;
        for l in w.iter() {
            let sym = self.symbol(l);
            let target = match sym {
                Symbol::Vertex(v, _) => v,
                Symbol::Stable(e) => self.gog.edge(e).from,
            };
            for e in self.tree.path(&self.gog, cur, target) {
                out.push(self.hat_stable[e]);
            }
            out.push(self.hat_letter(sym));
            cur = match sym {
                Symbol::Vertex(v, _) => v,
                Symbol::Stable(e) => self.gog.edge(e).to,
            };
        }
        Ok(out)
    }

    fn hat_letter(&self, sym: Symbol) -> Letter {
        match sym {
            Symbol::Vertex(v, l) => self.hat_vertex[v][l.index()],
            Symbol::Stable(e) => self.hat_stable[e],
        }
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.gog.vertices().len() {
            Ok(())
        } else {
            Err(Error::Precondition(format!("no vertex with index {v}")))
        }
    }

    /// Split an inflated word at its stable letters, checking that the edges
    /// form a path from `base` and each segment stays in its vertex.
    pub fn parse_alternating(&self, w: &Word, base: usize) -> Result<InflatedWord> {
        self.check_vertex(base)?;
        if !self.hat.contains_word(w) {
            return Err(Error::AlphabetMismatch("word is not over the inflated alphabet".into()));
        }
        let mut iw = InflatedWord::trivial(base);
        let mut cur = base;
        for (i, l) in w.iter().enumerate() {
            match self.hat_symbol(l) {
                Symbol::Vertex(v, local) => {
                    if v != cur {
                        return Err(Error::Precondition(format!(
                            "letter {} at position {i} belongs to vertex {}, expected {}",
                            self.hat.name(l),
                            self.gog.vertex(v).name,
                            self.gog.vertex(cur).name
                        )));
                    }
                    iw.segment_mut(iw.path.len()).push(local);
                }
                Symbol::Stable(e) => {
                    let edge = self.gog.edge(e);
                    if edge.from != cur {
                        return Err(Error::Precondition(format!(
                            "stable letter {} at position {i} leaves {}, expected {}",
                            self.hat.name(l),
                            self.gog.vertex(edge.from).name,
                            self.gog.vertex(cur).name
                        )));
                    }
                    iw.path.push((e, Word::empty()));
                    cur = edge.to;
                }
            }
        }
        Ok(iw)
    }

    /// The inflated word spelled by an alternating structure.
    pub fn spell(&self, iw: &InflatedWord) -> Word {
        let mut out: Word = iw.u0.iter().map(|l| self.hat_vertex[iw.base][l.index()]).collect();
        for (e, u) in &iw.path {
            out.push(self.hat_stable[*e]);
            let v = self.gog.edge(*e).to;
            out.extend_from(&u.iter().map(|l| self.hat_vertex[v][l.index()]).collect());
        }
        out
    }

    /// The deflated word of a vertex-local word.
    pub fn lift(&self, v: usize, u: &Word) -> Word {
        self.deflate(&u.iter().map(|l| self.hat_vertex[v][l.index()]).collect())
    }

    /// The local word of `w` when every letter of `w` comes from `X_v`.
    pub fn local_word(&self, v: usize, w: &Word) -> Option<Word> {
        w.iter()
            .map(|l| match self.symbol(l) {
                Symbol::Vertex(u, local) if u == v => Some(local),
                _ => None,
            })
            .collect()
    }

    /// Accepts full names (`A.a`, `s_e`) and, where unambiguous, bare vertex
    /// generator names (`a`).
    pub fn parse(&self, s: &str) -> Result<Word> {
        parse_with_short(&self.deflated, s)
    }

    pub fn parse_inflated(&self, s: &str) -> Result<Word> {
        parse_with_short(&self.hat, s)
    }

    /// Formats with bare generator names wherever they are unambiguous.
    pub fn format(&self, w: &Word) -> String {
        format_short(&self.deflated_short, w)
    }

    pub fn format_inflated(&self, w: &Word) -> String {
        format_short(&self.hat_short, w)
    }

    /// A local word of vertex `v`, formatted like [`Pi1::format`].
    pub fn format_local(&self, v: usize, u: &Word) -> String {
        self.format_inflated(&u.iter().map(|l| self.hat_vertex[v][l.index()]).collect())
    }
}

fn short_of(name: &str) -> &str {
    if name.starts_with("s_") {
        return name;
    }
    name.split_once('.').map_or(name, |(_, rest)| rest)
}

fn short_names(al: &Alphabet) -> Vec<String> {
    let gens = al.generator_names();
    al.letters()
        .map(|l| {
            let full = al.name(l);
            let g = &gens[al.generator_of(l)];
            let short = short_of(g);
            let unique = gens.iter().filter(|h| short_of(h) == short).count() == 1;
            if unique && short != g.as_str() {
                full.replacen(g.as_str(), short, 1)
            } else {
                full.to_string()
            }
        })
        .collect()
}

fn format_short(names: &[String], w: &Word) -> String {
    if w.is_empty() {
        return "ε".to_string();
    }
    w.iter().map(|l| names[l.index()].as_str()).collect::<Vec<_>>().join(" ")
}

fn parse_with_short(al: &Alphabet, s: &str) -> Result<Word> {
    let gens = al.generator_names();
    let mut rewritten = Vec::new();
    for tok in s.split_whitespace() {
        let (base, suffix) = match tok.find('^') {
            Some(i) => tok.split_at(i),
            None => (tok, ""),
        };
        if tok == "ε" || al.letter(base).is_some() {
            rewritten.push(tok.to_string());
            continue;
        }
        let matches: Vec<&String> = gens.iter().filter(|g| short_of(g) == base).collect();
        match matches.as_slice() {
            [g] => rewritten.push(format!("{g}{suffix}")),
            [] => return Err(Error::UnknownLetter(base.to_string())),
            _ => {
                return Err(Error::UnknownLetter(format!(
                    "`{base}` is ambiguous; qualify it with a vertex name"
                )))
            }
        }
    }
    al.parse(&rewritten.join(" "))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::backend::{AbelianBackend, AbelianSubgroup, FreeBackend, GroupBackend, SubgroupContext, TrivialSubgroup};
    use crate::gog::EdgeSpec;

    pub(crate) fn z(name: &str) -> Arc<AbelianBackend> {
        Arc::new(AbelianBackend::with_names(1, &[], &[name]).unwrap())
    }

    fn cyclic(g: &Arc<AbelianBackend>, w: &str) -> Arc<dyn SubgroupContext> {
        let word = g.alphabet().parse(w).unwrap();
        Arc::new(AbelianSubgroup::new(g.clone(), vec![word]).unwrap())
    }

    /// `Z * Z` as two vertices joined by an edge with trivial edge groups.
    pub(crate) fn free_product() -> Pi1 {
        let (a, b) = (z("a"), z("b"));
        let mut gog = GraphOfGroups::new();
        gog.add_vertex("A", a.clone()).unwrap();
        gog.add_vertex("B", b.clone()).unwrap();
        gog.add_edge(EdgeSpec {
            name: "e".into(),
            from: 0,
            to: 1,
            subgroup: Arc::new(TrivialSubgroup::new(b)),
            reverse_subgroup: Arc::new(TrivialSubgroup::new(a)),
            iso: vec![],
            reverse_name: None,
            reverse_iso: None,
        })
        .unwrap();
        Pi1::with_default_tree(Arc::new(gog)).unwrap()
    }

    /// `⟨a, b | a² = b³⟩`; the edge `e` runs from A to B with `G_e = ⟨b³⟩`.
    pub(crate) fn trefoil() -> Pi1 {
        let (a, b) = (z("a"), z("b"));
        let mut gog = GraphOfGroups::new();
        gog.add_vertex("A", a.clone()).unwrap();
        gog.add_vertex("B", b.clone()).unwrap();
        let sub_b = cyclic(&b, "b^3");
        let sub_a = cyclic(&a, "a^2");
        let y = sub_a.generators().alphabet().parse("y1").unwrap();
        gog.add_edge(EdgeSpec {
            name: "e".into(),
            from: 0,
            to: 1,
            subgroup: sub_b,
            reverse_subgroup: sub_a,
            iso: vec![y],
            reverse_name: None,
            reverse_iso: None,
        })
        .unwrap();
        Pi1::with_default_tree(Arc::new(gog)).unwrap()
    }

    /// HNN extension of `F(a, b)` over `⟨a⟩` with `t a t⁻¹ = a`.
    pub(crate) fn hnn_free() -> Pi1 {
        let f = Arc::new(FreeBackend::new(2).unwrap());
        let gen = f.alphabet().parse("a").unwrap();
        let sub: Arc<dyn SubgroupContext> =
            Arc::new(crate::backend::FreeCyclicSubgroup::new(f.clone(), gen).unwrap());
        let mut gog = GraphOfGroups::new();
        gog.add_vertex("V", f).unwrap();
        let y = sub.generators().alphabet().parse("y1").unwrap();
        gog.add_edge(EdgeSpec {
            name: "f".into(),
            from: 0,
            to: 0,
            subgroup: sub.clone(),
            reverse_subgroup: sub,
            iso: vec![y],
            reverse_name: None,
            reverse_iso: None,
        })
        .unwrap();
        Pi1::with_default_tree(Arc::new(gog)).unwrap()
    }

    #[test]
    fn alphabets_and_names() {
        let p = free_product();
        assert_eq!(p.inflated_alphabet().generator_names(), &["A.a", "B.b", "s_e"]);
        assert_eq!(p.alphabet().generator_names(), &["A.a", "B.b"]);
        let w = p.parse("a B.b^-1 a^2").unwrap();
        assert_eq!(p.format(&w), "a b^-1 a a");
        let h = hnn_free();
        assert_eq!(h.alphabet().generator_names(), &["V.a", "V.b", "s_f"]);
    }

    #[test]
    fn inflate_examples() {
        let p = free_product();
        let w = p.parse("a b").unwrap();
        let hat = p.inflate(&w, 0).unwrap();
        assert_eq!(p.format_inflated(&hat), "a s_e b");
        assert_eq!(p.deflate(&hat), w);
        assert!(p.inflate(&Word::empty(), 0).unwrap().is_empty());

        let h = hnn_free();
        let w = h.parse("s_f a s_f^-1").unwrap();
        let hat = h.inflate(&w, 0).unwrap();
        assert_eq!(h.format_inflated(&hat), "s_f a s_f^-1");
        let iw = h.parse_alternating(&hat, 0).unwrap();
        assert_eq!(iw.path.iter().map(|p| p.0).collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn deflate_examples() {
        let p = free_product();
        let w = p.parse_inflated("a s_e b").unwrap();
        assert_eq!(p.format(&p.deflate(&w)), "a b");
        let h = hnn_free();
        let w = h.parse_inflated("s_f").unwrap();
        assert_eq!(h.format(&h.deflate(&w)), "s_f");
    }

    #[test]
    fn parse_alternating_examples() {
        let p = free_product();
        let iw = p.parse_alternating(&p.parse_inflated("a s_e b").unwrap(), 0).unwrap();
        assert_eq!(p.format_local(0, &iw.u0), "a");
        assert_eq!(iw.path.len(), 1);
        assert_eq!(p.format_local(1, &iw.path[0].1), "b");
        assert_eq!(p.parse_alternating(&Word::empty(), 1).unwrap(), InflatedWord::trivial(1));
        assert!(p.parse_alternating(&p.parse_inflated("b s_e a").unwrap(), 1).is_err());
        assert!(p.parse_alternating(&p.parse_inflated("a b").unwrap(), 0).is_err());
    }

    #[test]
    fn inflate_round_trip() {
        for p in [free_product(), trefoil(), hnn_free()] {
            for w in p.alphabet().all_words(4) {
                for start in 0..p.gog().vertices().len() {
                    let hat = p.inflate(&w, start).unwrap();
                    assert_eq!(p.deflate(&hat), w);
                    let iw = p.parse_alternating(&hat, start).unwrap();
                    assert_eq!(p.spell(&iw), hat);
                }
            }
        }
    }
}
