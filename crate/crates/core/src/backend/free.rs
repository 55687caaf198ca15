use std::sync::Arc;

use super::{GroupBackend, SubgroupContext};
use crate::error::{Error, Result};
use crate::fsa::{Dfa, Language};
use crate::word::{Alphabet, GeneratingSet, Letter, Word};

/// Free group on named generators; canonical forms are freely reduced words.
#[derive(Debug, Clone)]
pub struct FreeBackend {
    alphabet: Alphabet,
    dfa: Dfa,
}

impl FreeBackend {
    /// Default names `a, b, c, ...` (or `f1, f2, ...` beyond 26).
    pub fn new(rank: usize) -> Result<Self> {
        let names: Vec<String> = if rank <= 26 {
            (0..rank).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
        } else {
            (1..=rank).map(|i| format!("f{i}")).collect()
        };
        Self::with_names(&names)
    }

    pub fn with_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let alphabet = Alphabet::new(names)?;
        // state 0 start, state 1 + l: last letter l
        let mut dfa = Dfa::for_alphabet(&alphabet, 1 + alphabet.size(), 0);
        for s in 0..dfa.num_states() {
            dfa.set_accepting(s, true);
        }
        for l in alphabet.letters() {
            dfa.add_transition(0, l, 1 + l.index())?;
            for k in alphabet.letters() {
                if alphabet.inverse(k) != l {
                    dfa.add_transition(1 + k.index(), l, 1 + l.index())?;
                }
            }
        }
        Ok(FreeBackend {
            dfa: dfa.minimize(),
            alphabet,
        })
    }
}

impl GroupBackend for FreeBackend {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn canonical(&self, w: &Word) -> Word {
        self.alphabet.free_reduce(w)
    }

    fn canonical_language(&self) -> Language {
        Language::from_dfa(&self.alphabet, self.dfa.clone()).expect("own alphabet")
    }
}

/// Cyclic subgroup `⟨c⟩` of a free group, `c` cyclically reduced.
///
/// Right cosets are the vertices of the Schreier graph: a cycle labelled `c`
/// through the base vertex with a reduced tree hanging off every cycle
/// vertex. The representative of a coset is its shortlex-least geodesic from
/// the base vertex.
#[derive(Debug, Clone)]
pub struct FreeCyclicSubgroup {
    parent: Arc<FreeBackend>,
    gens: GeneratingSet,
    cycle: Vec<Letter>,
    /// Chosen route from the base to each cycle vertex.
    routes: Vec<Word>,
    dfa: Dfa,
}

/// Where a reduced word ends in the Schreier graph.
struct Walk {
    position: usize,
    winding: i64,
    tail: Word,
}

impl FreeCyclicSubgroup {
    pub fn new(parent: Arc<FreeBackend>, gen: Word) -> Result<Self> {
        Self::with_generators(parent, GeneratingSet::numbered("y", vec![gen])?)
    }

    pub fn with_generators(parent: Arc<FreeBackend>, gens: GeneratingSet) -> Result<Self> {
        let al = parent.alphabet().clone();
        if gens.len() != 1 {
            return Err(Error::InvalidSubgroup(format!(
                "cyclic subgroup needs one generator, got {}",
                gens.len()
            )));
        }
        let c = gens.words()[0].clone();
        if !al.contains_word(&c) {
            return Err(Error::AlphabetMismatch("generator outside the free group".into()));
        }
        if c.is_empty() || !al.is_freely_reduced(&c) {
            return Err(Error::InvalidSubgroup(format!(
                "generator `{}` must be nonempty and freely reduced",
                al.format(&c)
            )));
        }
        if c.len() > 1 && c.first().map(|l| al.inverse(l)) == c.last() {
            return Err(Error::InvalidSubgroup(format!(
                "generator `{}` is not cyclically reduced",
                al.format(&c)
            )));
        }
        let cycle = c.into_letters();
        let n = cycle.len();
        let mut routes = Vec::with_capacity(n);
        let mut forward = Vec::with_capacity(n);
        for p in 0..n {
            let fwd = Word::from_letters(cycle[..p].to_vec());
            let bwd: Word = cycle[p..].iter().rev().map(|&l| al.inverse(l)).collect();
            let take_fwd = p == 0 || fwd < bwd;
            forward.push(take_fwd);
            routes.push(if take_fwd { fwd } else { bwd });
        }
        let dfa = Self::build_dfa(&al, &cycle, &forward);
        Ok(FreeCyclicSubgroup {
            parent,
            gens,
            cycle,
            routes,
            dfa,
        })
    }

    fn build_dfa(al: &Alphabet, cycle: &[Letter], forward: &[bool]) -> Dfa {
        let n = cycle.len();
        // states: 0..n route states (0 = base), then n + l: tail ending in l
        let mut dfa = Dfa::for_alphabet(al, n + al.size(), 0);
        for s in 0..dfa.num_states() {
            dfa.set_accepting(s, true);
        }
        let tail = |l: Letter| n + l.index();
        for p in 0..n {
            let out_fwd = cycle[p];
            let out_bwd = al.inverse(cycle[(p + n - 1) % n]);
            for l in al.letters() {
                let target = if l == out_fwd {
                    let q = p + 1;
                    (q < n && forward[q] && (p == 0 || forward[p])).then_some(q)
                } else if l == out_bwd {
                    let q = (p + n - 1) % n;
                    (q != 0 && !forward[q] && (p == 0 || !forward[p])).then_some(q)
                } else {
                    Some(tail(l))
                };
                if let Some(t) = target {
                    dfa.add_transition(p, l, t).expect("fresh state");
                }
            }
        }
        for k in al.letters() {
            for l in al.letters() {
                if al.inverse(k) != l {
                    dfa.add_transition(tail(k), l, tail(l)).expect("fresh state");
                }
            }
        }
        dfa.minimize()
    }

    pub fn generator(&self) -> Word {
        Word::from_letters(self.cycle.clone())
    }

    fn walk(&self, w: &Word) -> Walk {
        let al = self.parent.alphabet();
        let r = al.free_reduce(w);
        let n = self.cycle.len();
        let (mut p, mut winding) = (0usize, 0i64);
        for (i, &l) in r.letters().iter().enumerate() {
            if l == self.cycle[p] {
                p += 1;
                if p == n {
                    p = 0;
                    winding += 1;
                }
            } else if l == al.inverse(self.cycle[(p + n - 1) % n]) {
                if p == 0 {
                    winding -= 1;
                    p = n;
                }
                p -= 1;
            } else {
                return Walk {
                    position: p,
                    winding,
                    tail: Word::from_letters(r.letters()[i..].to_vec()),
                };
            }
        }
        Walk {
            position: p,
            winding,
            tail: Word::empty(),
        }
    }
}

impl SubgroupContext for FreeCyclicSubgroup {
    fn parent(&self) -> &dyn GroupBackend {
        self.parent.as_ref()
    }

    fn generators(&self) -> &GeneratingSet {
        &self.gens
    }

    fn contains(&self, w: &Word) -> bool {
        let walk = self.walk(w);
        walk.position == 0 && walk.tail.is_empty()
    }

    fn h_express(&self, w: &Word) -> Option<Word> {
        let walk = self.walk(w);
        if walk.position != 0 || !walk.tail.is_empty() {
            return None;
        }
        let ya = self.gens.alphabet();
        Some(ya.power(&Word::single(ya.generator(0)), walk.winding))
    }

    fn coset_rep(&self, w: &Word) -> Word {
        let walk = self.walk(w);
        self.routes[walk.position].concat(&walk.tail)
    }

    fn coset_language(&self) -> Language {
        Language::from_dfa(self.parent.alphabet(), self.dfa.clone()).expect("own alphabet")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Arc<FreeBackend> {
        Arc::new(FreeBackend::new(2).unwrap())
    }

    fn sub(g: &str) -> FreeCyclicSubgroup {
        let f = f2();
        let c = f.alphabet().parse(g).unwrap();
        FreeCyclicSubgroup::new(f, c).unwrap()
    }

    #[test]
    fn strips_powers_on_the_left() {
        let h = sub("a");
        let al = h.parent().alphabet().clone();
        let rep = h.coset_rep(&al.parse("a a b a").unwrap());
        assert_eq!(al.format(&rep), "b a");
        assert!(h.contains(&al.parse("a^-1 a^-1 a^-1").unwrap()));
        let hab = sub("a b");
        assert_eq!(al.format(&hab.coset_rep(&al.parse("a b a b b").unwrap())), "b");
    }

    #[test]
    fn rejects_bad_generators() {
        let f = f2();
        let al = f.alphabet().clone();
        assert!(FreeCyclicSubgroup::new(f.clone(), Word::empty()).is_err());
        assert!(FreeCyclicSubgroup::new(f.clone(), al.parse("a b a^-1").unwrap()).is_err());
        assert!(FreeCyclicSubgroup::new(f, al.parse("a a^-1").unwrap()).is_err());
    }

    #[test]
    fn same_coset_same_rep() {
        // a and b^-1 lie in the same coset of ⟨ab⟩
        let h = sub("a b");
        let al = h.parent().alphabet().clone();
        let a = al.parse("a").unwrap();
        let b_inv = al.parse("b^-1").unwrap();
        assert_eq!(h.coset_rep(&a), h.coset_rep(&b_inv));
    }

    #[test]
    fn language_is_the_set_of_reps() {
        for g in ["a", "a b", "a a b", "a b a^-1 b^-1", "a a"] {
            let h = sub(g);
            let al = h.parent().alphabet().clone();
            let mut reps: Vec<Word> = al
                .all_words(6)
                .iter()
                .map(|w| h.coset_rep(w))
                .filter(|u| u.len() <= 4)
                .collect();
            reps.sort();
            reps.dedup();
            assert_eq!(h.coset_language().enumerate(4), reps, "generator {g}");
        }
    }

    #[test]
    fn decomposition_identity() {
        let h = sub("a a b");
        let al = h.parent().alphabet().clone();
        for w in al.all_words(5) {
            let (y, u) = super::super::decompose(&h, &w);
            let back = h.gens.evaluate(&al, &y).concat(&u);
            assert_eq!(al.free_reduce(&back), al.free_reduce(&w));
        }
    }

    #[test]
    fn proper_power_membership() {
        let h = sub("a a");
        let al = h.parent().alphabet().clone();
        assert!(!h.contains(&al.parse("a").unwrap()));
        assert!(h.contains(&al.parse("a^-1 a^-1").unwrap()));
        assert_eq!(al.format(&h.coset_rep(&al.parse("a^-1").unwrap())), "a");
    }
}
