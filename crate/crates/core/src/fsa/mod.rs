//! Finite state automata over generator alphabets.
//!
//! Transition functions are partial; a missing transition goes to an implicit
//! dead state. Letters are indices into the automaton's symbol table, which
//! for automata built from an [`Alphabet`] coincides with the alphabet order.

mod language;
mod minimize;
mod pair;
mod text;

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter, Word};

pub use language::{Language, LazyLanguage};
pub use pair::{build_pair_machine, difference_table, project_first, PairAlphabet, PairTable};

/// Deterministic automaton with a partial transition function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    symbols: Vec<String>,
    start: usize,
    accept: Vec<bool>,
    trans: Vec<Vec<Option<u32>>>,
}

impl Dfa {
    /// A DFA with `states` states and no transitions.
    pub fn new(symbols: Vec<String>, states: usize, start: usize) -> Self {
        let m = symbols.len();
        Dfa {
            symbols,
            start,
            accept: vec![false; states.max(1)],
            trans: vec![vec![None; m]; states.max(1)],
        }
    }

    pub fn for_alphabet(alphabet: &Alphabet, states: usize, start: usize) -> Self {
        Self::new(symbols_of(alphabet), states, start)
    }

    /// Accepts nothing.
    pub fn empty_language(symbols: Vec<String>) -> Self {
        Self::new(symbols, 1, 0)
    }

    /// Accepts only the empty word.
    pub fn epsilon_only(symbols: Vec<String>) -> Self {
        let mut d = Self::new(symbols, 1, 0);
        d.accept[0] = true;
        d
    }

    /// Accepts every word.
    pub fn universal(symbols: Vec<String>) -> Self {
        let m = symbols.len();
        let mut d = Self::new(symbols, 1, 0);
        d.accept[0] = true;
        for a in 0..m {
            d.trans[0][a] = Some(0);
        }
        d
    }

    /// Accepts exactly the given words.
    pub fn from_words(symbols: Vec<String>, words: &[Word]) -> Self {
        let mut d = Self::new(symbols, 1, 0);
        for w in words {
            let mut s = 0;
            for l in w.iter() {
                s = match d.trans[s][l.index()] {
                    Some(t) => t as usize,
                    None => {
                        let t = d.add_state(false);
                        d.trans[s][l.index()] = Some(t as u32);
                        t
                    }
                };
            }
            d.accept[s] = true;
        }
        d.minimize()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn num_letters(&self) -> usize {
        self.symbols.len()
    }

    pub fn num_states(&self) -> usize {
        self.accept.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, s: usize) -> bool {
        self.accept[s]
    }

    pub fn set_accepting(&mut self, s: usize, yes: bool) {
        self.accept[s] = yes;
    }

    pub fn add_state(&mut self, accepting: bool) -> usize {
        self.accept.push(accepting);
        self.trans.push(vec![None; self.symbols.len()]);
        self.accept.len() - 1
    }

    pub fn transition(&self, s: usize, a: Letter) -> Option<usize> {
        self.trans[s][a.index()].map(|t| t as usize)
    }

    /// Fails when `(from, a)` already has a different target.
    pub fn add_transition(&mut self, from: usize, a: Letter, to: usize) -> Result<()> {
        if a.index() >= self.symbols.len() || from >= self.num_states() || to >= self.num_states() {
            return Err(Error::Precondition("transition out of range".into()));
        }
        match self.trans[from][a.index()] {
            Some(t) if t as usize != to => Err(Error::Precondition(format!(
                "nondeterministic transition from state {from} on `{}`",
                self.symbols[a.index()]
            ))),
            _ => {
                self.trans[from][a.index()] = Some(to as u32);
                Ok(())
            }
        }
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, Letter, usize)> + '_ {
        self.trans.iter().enumerate().flat_map(|(s, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(a, t)| t.map(|t| (s, Letter(a as u32), t as usize)))
        })
    }

    pub fn run(&self, w: &Word) -> Option<usize> {
        self.run_from(self.start, w)
    }

    pub fn run_from(&self, mut s: usize, w: &Word) -> Option<usize> {
        for l in w.iter() {
            s = self.trans[s].get(l.index()).copied().flatten()? as usize;
        }
        Some(s)
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.run(w).is_some_and(|s| self.accept[s])
    }

    fn check_compatible(&self, other: &Dfa) -> Result<()> {
        if self.symbols != other.symbols {
            return Err(Error::AlphabetMismatch(format!(
                "[{}] vs [{}]",
                self.symbols.join(" "),
                other.symbols.join(" ")
            )));
        }
        Ok(())
    }

    /// Copy of this automaton with an explicit dead state so that every
    /// transition is defined. Returns the automaton and the dead state index.
    fn completed(&self) -> (Vec<Vec<usize>>, Vec<bool>, usize) {
        let n = self.num_states();
        let m = self.num_letters();
        let dead = n;
        let mut delta: Vec<Vec<usize>> = self
            .trans
            .iter()
            .map(|row| row.iter().map(|t| t.map_or(dead, |t| t as usize)).collect())
            .collect();
        delta.push(vec![dead; m]);
        let mut accept = self.accept.clone();
        accept.push(false);
        (delta, accept, dead)
    }

    /// Removes states that are unreachable or cannot reach an accepting state,
    /// and renumbers the rest in breadth-first order from the start state.
    pub fn trim(&self) -> Dfa {
        let n = self.num_states();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (s, _, t) in self.transitions() {
            rev[t].push(s);
        }
        let mut live = vec![false; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&s| self.accept[s]).collect();
        for &s in &queue {
            live[s] = true;
        }
        while let Some(t) = queue.pop_front() {
            for &s in &rev[t] {
                if !live[s] {
                    live[s] = true;
                    queue.push_back(s);
                }
            }
        }
        if !live[self.start] {
            return Dfa::empty_language(self.symbols.clone());
        }
        self.renumbered(|s| live[s])
    }

    /// Breadth-first renumbering over states satisfying `keep`.
    fn renumbered(&self, keep: impl Fn(usize) -> bool) -> Dfa {
        let m = self.num_letters();
        let mut id: HashMap<usize, usize> = HashMap::new();
        let mut order = vec![self.start];
        id.insert(self.start, 0);
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            i += 1;
            for a in 0..m {
                if let Some(t) = self.trans[s][a] {
                    let t = t as usize;
                    if keep(t) && !id.contains_key(&t) {
                        id.insert(t, order.len());
                        order.push(t);
                    }
                }
            }
        }
        let mut out = Dfa::new(self.symbols.clone(), order.len(), 0);
        for (new, &old) in order.iter().enumerate() {
            out.accept[new] = self.accept[old];
            for a in 0..m {
                if let Some(t) = self.trans[old][a] {
                    if let Some(&nt) = id.get(&(t as usize)) {
                        out.trans[new][a] = Some(nt as u32);
                    }
                }
            }
        }
        out
    }

    /// The canonical minimal automaton: trimmed, Hopcroft-minimized and
    /// numbered breadth-first, so equal languages give identical automata.
    pub fn minimize(&self) -> Dfa {
        let trimmed = self.trim();
        let (delta, accept, dead) = trimmed.completed();
        let class = minimize::hopcroft(&delta, &accept);
        let dead_class = class[dead];
        let num_classes = class.iter().copied().max().map_or(0, |c| c + 1);
        let start_class = class[trimmed.start];
        let mut out = Dfa::new(trimmed.symbols.clone(), num_classes, start_class);
        for s in 0..delta.len() {
            let c = class[s];
            out.accept[c] = accept[s];
            for (a, &t) in delta[s].iter().enumerate() {
                if class[t] != dead_class {
                    out.trans[c][a] = Some(class[t] as u32);
                }
            }
        }
        if start_class == dead_class {
            return Dfa::empty_language(trimmed.symbols);
        }
        out.renumbered(|c| c != dead_class).trim()
    }

    /// Complement relative to all words over the symbol set.
    pub fn complement(&self) -> Dfa {
        let (delta, accept, _) = self.completed();
        let mut out = Dfa::new(self.symbols.clone(), delta.len(), self.start);
        for (s, row) in delta.iter().enumerate() {
            out.accept[s] = !accept[s];
            for (a, &t) in row.iter().enumerate() {
                out.trans[s][a] = Some(t as u32);
            }
        }
        out.minimize()
    }

    fn product(&self, other: &Dfa, combine: impl Fn(bool, bool) -> bool) -> Result<Dfa> {
        self.check_compatible(other)?;
        let (d1, a1, _) = self.completed();
        let (d2, a2, _) = other.completed();
        let m = self.num_letters();
        let mut id: HashMap<(usize, usize), usize> = HashMap::new();
        let mut order = vec![(self.start, other.start)];
        id.insert((self.start, other.start), 0);
        let mut rows: Vec<Vec<Option<u32>>> = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let (p, q) = order[i];
            i += 1;
            let mut row = vec![None; m];
            for (a, slot) in row.iter_mut().enumerate() {
                let key = (d1[p][a], d2[q][a]);
                let next = *id.entry(key).or_insert_with(|| {
                    order.push(key);
                    order.len() - 1
                });
                *slot = Some(next as u32);
            }
            rows.push(row);
        }
        let accept = order.iter().map(|&(p, q)| combine(a1[p], a2[q])).collect();
        Ok(Dfa {
            symbols: self.symbols.clone(),
            start: 0,
            accept,
            trans: rows,
        }
        .minimize())
    }

    pub fn intersect(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a && b)
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a || b)
    }

    pub fn difference(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a && !b)
    }

    pub fn concat(&self, other: &Dfa) -> Result<Dfa> {
        self.check_compatible(other)?;
        let mut nfa = Nfa::from_dfa(self);
        let offset = nfa.num_states();
        let second = Nfa::from_dfa(other);
        for s in 0..second.num_states() {
            nfa.add_state(second.accept[s]);
            for (a, targets) in second.trans[s].iter().enumerate() {
                for &t in targets {
                    nfa.trans[offset + s][a].push(offset as u32 + t);
                }
            }
        }
        for s in 0..offset {
            if nfa.accept[s] {
                nfa.accept[s] = false;
                for &t in &second.starts {
                    nfa.eps[s].push((offset + t) as u32);
                }
            }
        }
        Ok(nfa.determinize())
    }

    /// Rewrites the automaton over a new symbol table; `map[a]` is the new
    /// letter for old letter `a` (letters mapped to `None` are dropped).
    pub fn relabel(&self, symbols: Vec<String>, map: &[Option<Letter>]) -> Result<Dfa> {
        let mut nfa = Nfa::new(symbols, self.num_states());
        nfa.starts = vec![self.start];
        nfa.accept = self.accept.clone();
        for (s, a, t) in self.transitions() {
            if let Some(b) = map[a.index()] {
                nfa.trans[s][b.index()].push(t as u32);
            }
        }
        Ok(nfa.determinize())
    }

    pub fn is_empty(&self) -> bool {
        let t = self.trim();
        !t.accept.iter().any(|&a| a)
    }

    /// Accepted words of length at most `n`, in shortlex order.
    pub fn enumerate(&self, n: usize) -> Vec<Word> {
        let t = self.trim();
        let mut out = Vec::new();
        if !t.accept.iter().any(|&a| a) {
            return out;
        }
        let mut layer: Vec<(Word, usize)> = vec![(Word::empty(), t.start)];
        for len in 0..=n {
            for (w, s) in &layer {
                if t.accept[*s] {
                    out.push(w.clone());
                }
            }
            if len == n {
                break;
            }
            let mut next = Vec::new();
            for (w, s) in &layer {
                for a in 0..t.num_letters() {
                    if let Some(u) = t.trans[*s][a] {
                        let mut v = w.clone();
                        v.push(Letter(a as u32));
                        next.push((v, u as usize));
                    }
                }
            }
            layer = next;
        }
        out
    }

    /// True when the two automata have the same transition graph up to
    /// renumbering of states.
    pub fn isomorphic(&self, other: &Dfa) -> bool {
        self.trim() == other.trim()
    }
}

pub(crate) fn symbols_of(alphabet: &Alphabet) -> Vec<String> {
    alphabet.letters().map(|l| alphabet.name(l).to_string()).collect()
}

/// Nondeterministic automaton with epsilon moves.
#[derive(Debug, Clone)]
pub struct Nfa {
    symbols: Vec<String>,
    starts: Vec<usize>,
    accept: Vec<bool>,
    trans: Vec<Vec<Vec<u32>>>,
    eps: Vec<Vec<u32>>,
}

impl Nfa {
    pub fn new(symbols: Vec<String>, states: usize) -> Self {
        let m = symbols.len();
        Nfa {
            symbols,
            starts: Vec::new(),
            accept: vec![false; states],
            trans: vec![vec![Vec::new(); m]; states],
            eps: vec![Vec::new(); states],
        }
    }

    pub fn from_dfa(d: &Dfa) -> Self {
        let mut n = Nfa::new(d.symbols.clone(), d.num_states());
        n.starts = vec![d.start];
        n.accept = d.accept.clone();
        for (s, a, t) in d.transitions() {
            n.trans[s][a.index()].push(t as u32);
        }
        n
    }

    pub fn num_states(&self) -> usize {
        self.accept.len()
    }

    pub fn add_state(&mut self, accepting: bool) -> usize {
        self.accept.push(accepting);
        self.trans.push(vec![Vec::new(); self.symbols.len()]);
        self.eps.push(Vec::new());
        self.accept.len() - 1
    }

    pub fn add_start(&mut self, s: usize) {
        self.starts.push(s);
    }

    pub fn set_accepting(&mut self, s: usize, yes: bool) {
        self.accept[s] = yes;
    }

    pub fn add_transition(&mut self, from: usize, a: Letter, to: usize) {
        self.trans[from][a.index()].push(to as u32);
    }

    pub fn add_epsilon(&mut self, from: usize, to: usize) {
        self.eps[from].push(to as u32);
    }

    fn closure(&self, set: &mut BTreeSet<u32>) {
        let mut stack: Vec<u32> = set.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for &t in &self.eps[s as usize] {
                if set.insert(t) {
                    stack.push(t);
                }
            }
        }
    }

    /// Subset construction followed by minimization.
    pub fn determinize(&self) -> Dfa {
        let m = self.symbols.len();
        let mut init: BTreeSet<u32> = self.starts.iter().map(|&s| s as u32).collect();
        self.closure(&mut init);
        let mut id: HashMap<BTreeSet<u32>, usize> = HashMap::new();
        let mut order = vec![init.clone()];
        id.insert(init, 0);
        let mut rows = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let set = order[i].clone();
            i += 1;
            let mut row = vec![None; m];
            for (a, slot) in row.iter_mut().enumerate() {
                let mut next: BTreeSet<u32> = BTreeSet::new();
                for &s in &set {
                    next.extend(self.trans[s as usize][a].iter().copied());
                }
                if next.is_empty() {
                    continue;
                }
                self.closure(&mut next);
                let t = match id.get(&next) {
                    Some(&t) => t,
                    None => {
                        order.push(next.clone());
                        id.insert(next, order.len() - 1);
                        order.len() - 1
                    }
                };
                *slot = Some(t as u32);
            }
            rows.push(row);
        }
        let accept = order
            .iter()
            .map(|set| set.iter().any(|&s| self.accept[s as usize]))
            .collect();
        Dfa {
            symbols: self.symbols.clone(),
            start: 0,
            accept,
            trans: rows,
        }
        .minimize()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(&["a", "b"]).unwrap()
    }

    fn words(al: &Alphabet, ws: &[&str]) -> Vec<Word> {
        ws.iter().map(|s| al.parse(s).unwrap()).collect()
    }

    #[test]
    fn concat_of_finite_languages() {
        let al = ab();
        let s = symbols_of(&al);
        let a = Dfa::from_words(s.clone(), &words(&al, &["a"]));
        let b = Dfa::from_words(s, &words(&al, &["b", "b b"]));
        let c = a.concat(&b).unwrap();
        assert_eq!(c.enumerate(6), words(&al, &["a b", "a b b"]));
    }

    #[test]
    fn double_complement_and_universal_intersection() {
        let al = ab();
        let s = symbols_of(&al);
        let a = Dfa::from_words(s.clone(), &words(&al, &["a", "a b^-1", "b b b"]));
        assert_eq!(a.complement().complement().enumerate(8), a.enumerate(8));
        let u = Dfa::universal(s);
        assert_eq!(a.intersect(&u).unwrap().enumerate(8), a.enumerate(8));
    }

    #[test]
    fn star_enumeration() {
        let al = Alphabet::new(&["x"]).unwrap();
        let mut d = Dfa::for_alphabet(&al, 1, 0);
        d.set_accepting(0, true);
        d.add_transition(0, al.letter("x").unwrap(), 0).unwrap();
        assert_eq!(d.enumerate(2), words(&al, &["ε", "x", "x x"]));
        assert!(Dfa::empty_language(symbols_of(&al)).enumerate(5).is_empty());
    }

    #[test]
    fn minimize_is_canonical() {
        let al = ab();
        let s = symbols_of(&al);
        // Two redundant copies of "a*".
        let mut d = Dfa::new(s, 2, 0);
        let a = al.letter("a").unwrap();
        d.set_accepting(0, true);
        d.set_accepting(1, true);
        d.add_transition(0, a, 1).unwrap();
        d.add_transition(1, a, 0).unwrap();
        let m = d.minimize();
        assert_eq!(m.num_states(), 1);
        assert_eq!(m.minimize(), m);
    }

    #[test]
    fn mismatched_alphabets_are_rejected() {
        let a = Dfa::universal(symbols_of(&ab()));
        let b = Dfa::universal(symbols_of(&Alphabet::new(&["x"]).unwrap()));
        assert!(matches!(a.intersect(&b), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn nondeterministic_insert_is_rejected() {
        let al = ab();
        let mut d = Dfa::for_alphabet(&al, 2, 0);
        let a = al.letter("a").unwrap();
        d.add_transition(0, a, 1).unwrap();
        assert!(d.add_transition(0, a, 0).is_err());
    }
}
