//! Vertex-group oracles: canonical forms, geodesic lengths, and the right
//! coset decomposition `g = h·u` with `u` a coset representative.

mod abelian;
mod finite;
mod free;
mod lattice;

use std::fmt;
use std::sync::Arc;

use crate::fsa::{Dfa, Language};
use crate::word::{Alphabet, GeneratingSet, Letter, Word};

pub use abelian::{AbelianBackend, AbelianSubgroup};
pub use finite::{parse_table, FiniteBackend, FiniteSubgroup};
pub use free::{FreeBackend, FreeCyclicSubgroup};

pub trait GroupBackend: Send + Sync + fmt::Debug {
    fn alphabet(&self) -> &Alphabet;

    /// Shortlex-least word for the element of `w`.
    fn canonical(&self, w: &Word) -> Word;

    fn geodesic_length(&self, w: &Word) -> usize {
        self.canonical(w).len()
    }

    /// The geodesic length of `w` if it is at most `cap`. Backends that
    /// search for geodesics stop at `cap`.
    fn geodesic_length_within(&self, w: &Word, cap: usize) -> Option<usize> {
        let d = self.geodesic_length(w);
        (d <= cap).then_some(d)
    }

    fn equal(&self, a: &Word, b: &Word) -> bool {
        self.canonical(a) == self.canonical(b)
    }

    fn is_identity(&self, w: &Word) -> bool {
        self.canonical(w).is_empty()
    }

    fn canonical_language(&self) -> Language;

    /// Canonical forms of all elements of length at most `r`.
    fn ball(&self, r: usize) -> Vec<Word> {
        self.canonical_language().enumerate(r)
    }
}

/// A subgroup `H` of a backend group, generated by named words `Y`.
pub trait SubgroupContext: Send + Sync + fmt::Debug {
    fn parent(&self) -> &dyn GroupBackend;

    fn generators(&self) -> &GeneratingSet;

    fn contains(&self, w: &Word) -> bool {
        self.coset_rep(w).is_empty()
    }

    /// A word over `Y±` equal to `w`, defined when `w ∈ H`.
    fn h_express(&self, w: &Word) -> Option<Word>;

    /// The representative of `Hw` in the coset language; `ε` for `w ∈ H`.
    fn coset_rep(&self, w: &Word) -> Word;

    fn coset_language(&self) -> Language;

    fn min_coset_length(&self, w: &Word) -> usize {
        self.coset_rep(w).len()
    }
}

/// Split `w` as `h·u` with `h` over `Y±` and `u = coset_rep(w)`.
pub fn decompose(ctx: &dyn SubgroupContext, w: &Word) -> (Word, Word) {
    let u = ctx.coset_rep(w);
    let al = ctx.parent().alphabet();
    let hw = w.concat(&al.invert(&u));
    let h = ctx
        .h_express(&hw)
        .expect("w·coset_rep(w)⁻¹ lies in the subgroup");
    (h, u)
}

/// The trivial subgroup of any backend: coset representatives are canonical
/// forms.
#[derive(Debug, Clone)]
pub struct TrivialSubgroup {
    parent: Arc<dyn GroupBackend>,
    gens: GeneratingSet,
}

impl TrivialSubgroup {
    pub fn new(parent: Arc<dyn GroupBackend>) -> Self {
        TrivialSubgroup {
            parent,
            gens: GeneratingSet::numbered("y", Vec::new()).expect("empty generating set"),
        }
    }
}

impl SubgroupContext for TrivialSubgroup {
    fn parent(&self) -> &dyn GroupBackend {
        self.parent.as_ref()
    }

    fn generators(&self) -> &GeneratingSet {
        &self.gens
    }

    fn contains(&self, w: &Word) -> bool {
        self.parent.is_identity(w)
    }

    fn h_express(&self, w: &Word) -> Option<Word> {
        self.contains(w).then(Word::empty)
    }

    fn coset_rep(&self, w: &Word) -> Word {
        self.parent.canonical(w)
    }

    fn coset_language(&self) -> Language {
        self.parent.canonical_language()
    }
}

/// DFA accepting `g_1^{e_1} g_2^{e_2} ⋯` over the given generator blocks in
/// order, each exponent nonzero only once. A block `(g, Some(d))` allows
/// exponents in `(-d/2, d/2]`; `(g, None)` allows any exponent.
pub(crate) fn block_dfa(alphabet: &Alphabet, blocks: &[(usize, Option<u64>)]) -> Dfa {
    // state 0: start; then per block and sign, one state per count
    let mut dfa = Dfa::for_alphabet(alphabet, 1, 0);
    dfa.set_accepting(0, true);
    let mut entries: Vec<Vec<(Letter, usize, usize)>> = Vec::new(); // (letter, first, last)
    for &(g, order) in blocks {
        let pos = alphabet.generator(g);
        let neg = alphabet.inverse(pos);
        let (pmax, nmax) = match order {
            None => (1, 1),
            Some(d) => ((d / 2) as usize, ((d - 1) / 2) as usize),
        };
        let mut spec = vec![(pos, pmax)];
        if neg != pos {
            spec.push((neg, nmax));
        }
        let mut sides = Vec::new();
        for (letter, count) in spec {
            if count == 0 {
                continue;
            }
            let first = dfa.num_states();
            for i in 0..count {
                let s = dfa.add_state(true);
                if i > 0 {
                    dfa.add_transition(s - 1, letter, s).expect("fresh chain");
                }
            }
            let last = dfa.num_states() - 1;
            if order.is_none() {
                dfa.add_transition(last, letter, last).expect("fresh loop");
            }
            sides.push((letter, first, last));
        }
        entries.push(sides);
    }
    // from the start or the end of any earlier block, enter any later block
    for (b, sides) in entries.iter().enumerate() {
        let mut sources = vec![0];
        for earlier in &entries[..b] {
            for &(_, first, last) in earlier {
                sources.extend(first..=last);
            }
        }
        for &(letter, first, _) in sides {
            for &s in &sources {
                dfa.add_transition(s, letter, first).expect("blocks are disjoint");
            }
        }
    }
    dfa.minimize()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_dfa_counts() {
        let al = Alphabet::new(&["x", "t"]).unwrap();
        let d = block_dfa(&al, &[(0, None), (1, Some(4))]);
        // x^a t^b with b in {-1,0,1,2}
        let words = d.enumerate(3);
        assert!(words.contains(&al.parse("x t t").unwrap()));
        assert!(words.contains(&al.parse("x^-1 t^-1").unwrap()));
        assert!(words.contains(&al.parse("t t").unwrap()));
        assert!(!words.contains(&al.parse("t^-1 t^-1").unwrap()));
        assert!(!words.contains(&al.parse("t x").unwrap()));
        assert!(!words.contains(&al.parse("x x^-1").unwrap()));
        // lengths ≤ 3: b ∈ {-1,0,1,2} and |a| + |b| ≤ 3
        let brute = (-3i64..=3)
            .flat_map(|a| [-1i64, 0, 1, 2].into_iter().map(move |b| (a, b)))
            .filter(|(a, b)| a.abs() + b.abs() <= 3)
            .count();
        assert_eq!(words.len(), brute);
    }
}
