//! Automata over padded pairs of words (word-difference machines).
//!
//! A pair `(w, v)` is read synchronously; when one word is exhausted its track
//! is filled with the padding symbol `_`. Padding may only occur as a suffix
//! of a track.

use std::collections::HashMap;

use super::{Dfa, Nfa};
use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter, Word};

#[derive(Debug, Clone)]
pub struct PairAlphabet {
    base: Alphabet,
}

impl PairAlphabet {
    pub fn new(base: &Alphabet) -> Self {
        PairAlphabet { base: base.clone() }
    }

    pub fn base(&self) -> &Alphabet {
        &self.base
    }

    /// Number of pair letters; `(_, _)` is excluded.
    pub fn size(&self) -> usize {
        let m = self.base.size() + 1;
        m * m - 1
    }

    pub fn letter(&self, a: Option<Letter>, b: Option<Letter>) -> Option<Letter> {
        let m = self.base.size();
        let ai = a.map_or(m, |l| l.index());
        let bi = b.map_or(m, |l| l.index());
        if ai == m && bi == m {
            return None;
        }
        Some(Letter((ai * (m + 1) + bi) as u32))
    }

    pub fn split(&self, l: Letter) -> (Option<Letter>, Option<Letter>) {
        let m = self.base.size();
        let (ai, bi) = (l.index() / (m + 1), l.index() % (m + 1));
        let side = |i: usize| (i < m).then_some(Letter(i as u32));
        (side(ai), side(bi))
    }

    pub fn symbols(&self) -> Vec<String> {
        (0..self.size() as u32)
            .map(|i| {
                let (a, b) = self.split(Letter(i));
                let name = |x: Option<Letter>| x.map_or("_".to_string(), |l| self.base.name(l).to_string());
                format!("({},{})", name(a), name(b))
            })
            .collect()
    }

    /// Encode a pair of words with suffix padding.
    pub fn encode(&self, w: &Word, v: &Word) -> Word {
        let n = w.len().max(v.len());
        (0..n)
            .map(|i| {
                self.letter(w.letters().get(i).copied(), v.letters().get(i).copied())
                    .expect("at least one track is live")
            })
            .collect()
    }
}

/// Difference states and their transitions `(d, (a, b)) -> d'`; `None`
/// stands for padding.
#[derive(Debug, Clone, Default)]
pub struct PairTable {
    pub states: Vec<Word>,
    pub transitions: Vec<(usize, Option<Letter>, Option<Letter>, usize)>,
}

/// Word-difference transitions among `differences`: reading `(a, b)` from
/// difference `d` leads to `b⁻¹·d·a`. Transitions leaving the set are omitted.
pub fn difference_table(
    alphabet: &Alphabet,
    differences: &[Word],
    canonical: impl Fn(&Word) -> Word,
) -> PairTable {
    let keys: Vec<Word> = differences.iter().map(&canonical).collect();
    let index: HashMap<&Word, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut side: Vec<Option<Letter>> = alphabet.letters().map(Some).collect();
    side.push(None);
    let mut transitions = Vec::new();
    for (i, d) in keys.iter().enumerate() {
        for &a in &side {
            for &b in &side {
                if a.is_none() && b.is_none() {
                    continue;
                }
                let mut w = Word::empty();
                if let Some(b) = b {
                    w.push(alphabet.inverse(b));
                }
                w.extend_from(d);
                if let Some(a) = a {
                    w.push(a);
                }
                if let Some(&j) = index.get(&canonical(&w)) {
                    transitions.push((i, a, b, j));
                }
            }
        }
    }
    PairTable {
        states: keys,
        transitions,
    }
}

/// DFA over padded pairs whose difference path starts at `start`, stays in
/// the table, and ends in one of `targets`.
pub fn build_pair_machine(
    pairs: &PairAlphabet,
    table: &PairTable,
    start: usize,
    targets: &[usize],
) -> Result<Dfa> {
    let n = table.states.len();
    if !table.states.iter().any(|w| w.is_empty()) {
        return Err(Error::TableNotClosed("identity difference missing".into()));
    }
    if start >= n || targets.iter().any(|&t| t >= n) {
        return Err(Error::TableNotClosed("start or target outside the table".into()));
    }
    // modes: 0 both tracks live, 1 first track padded, 2 second track padded
    let state = |d: usize, mode: usize| d * 3 + mode;
    let mut dfa = Dfa::new(pairs.symbols(), 3 * n, state(start, 0));
    for &t in targets {
        for mode in 0..3 {
            dfa.set_accepting(state(t, mode), true);
        }
    }
    for &(from, a, b, to) in &table.transitions {
        if from >= n || to >= n {
            return Err(Error::TableNotClosed(format!(
                "transition {from} -> {to} leaves a table of {n} differences"
            )));
        }
        let letter = pairs
            .letter(a, b)
            .ok_or_else(|| Error::TableNotClosed("(_, _) transition".into()))?;
        let modes: &[(usize, usize)] = match (a, b) {
            (Some(_), Some(_)) => &[(0, 0)],
            (None, Some(_)) => &[(0, 1), (1, 1)],
            (Some(_), None) => &[(0, 2), (2, 2)],
            (None, None) => unreachable!(),
        };
        for &(m_from, m_to) in modes {
            dfa.add_transition(state(from, m_from), letter, state(to, m_to))?;
        }
    }
    Ok(dfa.minimize())
}

/// Projection of a pair language onto its first track.
pub fn project_first(pairs: &PairAlphabet, dfa: &Dfa) -> Dfa {
    let base = pairs.base();
    let symbols: Vec<String> = base.letters().map(|l| base.name(l).to_string()).collect();
    let mut nfa = Nfa::new(symbols, dfa.num_states());
    nfa.add_start(dfa.start());
    for s in 0..dfa.num_states() {
        nfa.set_accepting(s, dfa.is_accepting(s));
    }
    for (s, l, t) in dfa.transitions() {
        match pairs.split(l).0 {
            Some(a) => nfa.add_transition(s, a, t),
            None => nfa.add_epsilon(s, t),
        }
    }
    nfa.determinize()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_table_is_diagonal() {
        let al = Alphabet::new(&["x"]).unwrap();
        let pairs = PairAlphabet::new(&al);
        let table = difference_table(&al, &[Word::empty()], |w| al.free_reduce(w));
        let dfa = build_pair_machine(&pairs, &table, 0, &[0]).unwrap();
        for w in al.all_words(3) {
            for v in al.all_words(3) {
                assert_eq!(dfa.accepts(&pairs.encode(&w, &v)), w == v);
            }
        }
        let proj = project_first(&pairs, &dfa);
        assert_eq!(proj.enumerate(3), al.all_words(3));
    }

    #[test]
    fn empty_pair_language_projects_to_empty() {
        let al = Alphabet::new(&["x"]).unwrap();
        let pairs = PairAlphabet::new(&al);
        let dfa = Dfa::empty_language(pairs.symbols());
        assert!(project_first(&pairs, &dfa).is_empty());
    }

    #[test]
    fn missing_identity_is_rejected() {
        let al = Alphabet::new(&["x"]).unwrap();
        let pairs = PairAlphabet::new(&al);
        let table = PairTable {
            states: vec![al.parse("x").unwrap()],
            transitions: vec![],
        };
        assert!(build_pair_machine(&pairs, &table, 0, &[0]).is_err());
    }

    #[test]
    fn unclosed_table_is_rejected() {
        let al = Alphabet::new(&["x"]).unwrap();
        let pairs = PairAlphabet::new(&al);
        let x = al.letter("x").unwrap();
        let table = PairTable {
            states: vec![Word::empty()],
            transitions: vec![(0, Some(x), Some(x), 3)],
        };
        assert!(matches!(
            build_pair_machine(&pairs, &table, 0, &[0]),
            Err(Error::TableNotClosed(_))
        ));
    }

    #[test]
    fn singleton_projection() {
        let al = Alphabet::new(&["x1", "x2"]).unwrap();
        let pairs = PairAlphabet::new(&al);
        let w = al.parse("x1 x2").unwrap();
        let v = al.parse("x2 x1").unwrap();
        let dfa = Dfa::from_words(pairs.symbols(), &[pairs.encode(&w, &v)]);
        assert_eq!(project_first(&pairs, &dfa).enumerate(4), vec![w]);
    }
}
