use std::collections::{HashMap, VecDeque};

use super::{BaseMode, Pi1, Symbol};
use crate::error::{Error, Result};
use crate::fsa::Dfa;

/// Context of the automaton: the base segment or the segment after an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Ctx {
    Base,
    Edge(usize),
}

type State = (Ctx, usize, bool);

impl Pi1 {
    /// The Higgins (coset) language over the deflated alphabet as a DFA.
    ///
    /// A state is a context, a state of that context's component automaton
    /// and whether the current segment is still empty. Leaving a vertex runs
    /// along the tree path with empty intermediate segments.
    pub fn higgins_automaton(&self, mode: BaseMode) -> Result<Dfa> {
        let base_lang = match mode {
            BaseMode::Group(v) => self.vertex_language(v),
            BaseMode::Coset(e) => self.edge_language(e),
        };
        let base_dfa = base_lang.require_dfa("the base language has no automaton")?;
        let mut edge_dfas = Vec::with_capacity(self.gog().edges().len());
        for (e, edge) in self.gog().edges().iter().enumerate() {
            let d = self.edge_language(e).dfa().ok_or_else(|| {
                Error::NoAutomaton(format!("coset language of edge {} has no automaton", edge.name))
            })?;
            edge_dfas.push(d);
        }
        let comp = |c: Ctx| match c {
            Ctx::Base => base_dfa,
            Ctx::Edge(e) => edge_dfas[e],
        };
        let base_vertex = mode.vertex(self);
        let gog = self.gog();
        let vertex_of = |c: Ctx| match c {
            Ctx::Base => base_vertex,
            Ctx::Edge(e) => gog.edge(e).to,
        };

        let step = |(c, s, empty): State, sym: Symbol| -> Option<State> {
            let cur = vertex_of(c);
            if let Symbol::Vertex(v, l) = sym {
                if v == cur {
                    return comp(c).transition(s, l).map(|t| (c, t, false));
                }
            }
            if !comp(c).is_accepting(s) {
                return None;
            }
            let target = match sym {
                Symbol::Vertex(v, _) => v,
                Symbol::Stable(e) => gog.edge(e).from,
            };
            let mut edges = self.tree().path(gog, cur, target);
            if let Symbol::Stable(e) = sym {
                edges.push(e);
            }
            if let (Ctx::Edge(pe), true) = (c, empty) {
                if edges[0] == gog.edge(pe).reverse {
                    return None;
                }
            }
            let last = *edges.last().expect("leaving a vertex crosses an edge");
            for &e in &edges[..edges.len() - 1] {
                let d = edge_dfas[e];
                if !d.is_accepting(d.start()) {
                    return None;
                }
            }
            let d = edge_dfas[last];
            match sym {
                Symbol::Vertex(_, l) => d.transition(d.start(), l).map(|t| (Ctx::Edge(last), t, false)),
                Symbol::Stable(_) => Some((Ctx::Edge(last), d.start(), true)),
            }
        };
        let accepting = |(c, s, empty): State| {
            comp(c).is_accepting(s)
                && !matches!(c, Ctx::Edge(e) if empty && self.tree().contains(e))
        };

        let al = self.alphabet();
        let start: State = (Ctx::Base, base_dfa.start(), true);
        let mut ids: HashMap<State, usize> = HashMap::from([(start, 0)]);
        let mut states = vec![start];
        let mut dfa = Dfa::for_alphabet(al, 1, 0);
        dfa.set_accepting(0, accepting(start));
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let st = states[i];
            for l in al.letters() {
                let Some(next) = step(st, self.symbol(l)) else {
                    continue;
                };
                let j = match ids.get(&next) {
                    Some(&j) => j,
                    None => {
                        let j = dfa.add_state(accepting(next));
                        ids.insert(next, j);
                        states.push(next);
                        queue.push_back(j);
                        j
                    }
                };
                dfa.add_transition(i, l, j)?;
            }
        }
        Ok(dfa.minimize())
    }
}
