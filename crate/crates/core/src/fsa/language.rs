use std::fmt;
use std::sync::Arc;

use super::{symbols_of, Dfa};
use crate::error::{Error, Result};
use crate::word::{Alphabet, Word};

type Membership = Arc<dyn Fn(&Word) -> bool + Send + Sync>;
type Enumerator = Arc<dyn Fn(usize) -> Vec<Word> + Send + Sync>;

/// A language given by a decision procedure rather than an automaton.
#[derive(Clone)]
pub struct LazyLanguage {
    alphabet: Alphabet,
    membership: Membership,
    enumerator: Option<Enumerator>,
    prefix_closed: bool,
    dfa: Option<Dfa>,
}

impl fmt::Debug for LazyLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LazyLanguage")
            .field("letters", &self.alphabet.size())
            .field("prefix_closed", &self.prefix_closed)
            .field("dfa", &self.dfa.is_some())
            .finish()
    }
}

impl LazyLanguage {
    pub fn new(
        alphabet: Alphabet,
        membership: impl Fn(&Word) -> bool + Send + Sync + 'static,
    ) -> Self {
        LazyLanguage {
            alphabet,
            membership: Arc::new(membership),
            enumerator: None,
            prefix_closed: false,
            dfa: None,
        }
    }

    /// Declares the language closed under taking prefixes, which lets
    /// enumeration prune rejected branches.
    pub fn prefix_closed(mut self, yes: bool) -> Self {
        self.prefix_closed = yes;
        self
    }

    pub fn with_enumerator(
        mut self,
        f: impl Fn(usize) -> Vec<Word> + Send + Sync + 'static,
    ) -> Self {
        self.enumerator = Some(Arc::new(f));
        self
    }

    pub fn with_dfa(mut self, dfa: Dfa) -> Self {
        self.dfa = Some(dfa);
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.alphabet.contains_word(w) && (self.membership)(w)
    }

    pub fn dfa(&self) -> Option<&Dfa> {
        self.dfa.as_ref()
    }

    pub fn enumerate(&self, n: usize) -> Vec<Word> {
        if let Some(e) = &self.enumerator {
            let mut ws = e(n);
            ws.retain(|w| w.len() <= n);
            ws.sort();
            ws.dedup();
            return ws;
        }
        if !self.prefix_closed {
            return self
                .alphabet
                .all_words(n)
                .into_iter()
                .filter(|w| (self.membership)(w))
                .collect();
        }
        let mut out = Vec::new();
        if !(self.membership)(&Word::empty()) {
            return out;
        }
        let mut layer = vec![Word::empty()];
        out.push(Word::empty());
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &layer {
                for l in self.alphabet.letters() {
                    let mut v = w.clone();
                    v.push(l);
                    if (self.membership)(&v) {
                        next.push(v);
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

/// Either an explicit automaton or an oracle-defined language.
#[derive(Debug, Clone)]
pub enum Language {
    Dfa { alphabet: Alphabet, dfa: Dfa },
    Lazy(LazyLanguage),
}

impl Language {
    pub fn from_dfa(alphabet: &Alphabet, dfa: Dfa) -> Result<Self> {
        if dfa.symbols() != symbols_of(alphabet).as_slice() {
            return Err(Error::AlphabetMismatch(
                "automaton symbols differ from the alphabet".into(),
            ));
        }
        Ok(Language::Dfa {
            alphabet: alphabet.clone(),
            dfa,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Language::Dfa { alphabet, .. } => alphabet,
            Language::Lazy(l) => l.alphabet(),
        }
    }

    pub fn contains(&self, w: &Word) -> bool {
        match self {
            Language::Dfa { dfa, .. } => dfa.accepts(w),
            Language::Lazy(l) => l.contains(w),
        }
    }

    /// All members of length at most `n`, shortlex ordered without repeats.
    pub fn enumerate(&self, n: usize) -> Vec<Word> {
        match self {
            Language::Dfa { dfa, .. } => dfa.enumerate(n),
            Language::Lazy(l) => l.enumerate(n),
        }
    }

    pub fn dfa(&self) -> Option<&Dfa> {
        match self {
            Language::Dfa { dfa, .. } => Some(dfa),
            Language::Lazy(l) => l.dfa(),
        }
    }

    pub fn require_dfa(&self, what: &str) -> Result<&Dfa> {
        self.dfa().ok_or_else(|| Error::NoAutomaton(what.to_string()))
    }

    /// Keep only members satisfying `keep`; stays lazy.
    pub fn filter(&self, keep: impl Fn(&Word) -> bool + Send + Sync + 'static) -> Language {
        let inner = self.clone();
        let inner2 = self.clone();
        let keep = Arc::new(keep);
        let keep2 = keep.clone();
        Language::Lazy(
            LazyLanguage::new(self.alphabet().clone(), move |w| {
                inner.contains(w) && keep(w)
            })
            .with_enumerator(move |n| {
                inner2
                    .enumerate(n)
                    .into_iter()
                    .filter(|w| keep2(w))
                    .collect()
            }),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lazy_agrees_with_dfa_when_present() {
        let al = Alphabet::new(&["x"]).unwrap();
        let x = al.letter("x").unwrap();
        let mut d = Dfa::for_alphabet(&al, 1, 0);
        d.set_accepting(0, true);
        d.add_transition(0, x, 0).unwrap();
        let lazy = LazyLanguage::new(al.clone(), move |w: &Word| w.iter().all(|l| l == x))
            .prefix_closed(true)
            .with_dfa(d.clone());
        for w in al.all_words(6) {
            assert_eq!(lazy.contains(&w), d.accepts(&w));
        }
        assert_eq!(lazy.enumerate(4), d.enumerate(4));
    }

    #[test]
    fn filter_stays_consistent() {
        let al = Alphabet::new(&["x"]).unwrap();
        let d = Dfa::universal(symbols_of(&al));
        let lang = Language::from_dfa(&al, d).unwrap();
        let even = lang.filter(|w| w.len() % 2 == 0);
        assert_eq!(even.enumerate(2).len(), 1 + 4);
        assert!(even.contains(&al.parse("x x^-1").unwrap()));
        assert!(!even.contains(&al.parse("x").unwrap()));
    }
}
