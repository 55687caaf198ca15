use std::collections::VecDeque;
use std::sync::Arc;

use super::{GroupBackend, SubgroupContext};
use crate::error::{Error, Result};
use crate::fsa::{Dfa, Language};
use crate::word::{Alphabet, GeneratingSet, Word};

/// A finite group from its multiplication table; element 0 is the identity.
#[derive(Debug, Clone)]
pub struct FiniteBackend {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    alphabet: Alphabet,
    /// Element of each letter.
    letter_elem: Vec<usize>,
    /// Shortlex-least word of each element.
    normal: Vec<Word>,
    dfa: Dfa,
}

/// Parse a CSV multiplication table: row `i`, column `j` holds `i·j`.
pub fn parse_table(text: &str) -> Result<Vec<Vec<usize>>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(|c| c.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse {
                context: "multiplication table".into(),
                line: i + 1,
                message: e.to_string(),
            })?;
        rows.push(row);
    }
    Ok(rows)
}

impl FiniteBackend {
    /// `generators` pairs a name with an element index; when empty, every
    /// non-identity element `i` becomes a generator `g<i>`.
    pub fn new(table: Vec<Vec<usize>>, generators: &[(String, usize)]) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty multiplication table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!("entry {x} in row {i} is out of range")));
            }
        }
        for i in 0..n {
            if table[0][i] != i || table[i][0] != i {
                return Err(Error::InvalidGroup(format!("element 0 is not an identity for {i}")));
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for i in 0..n {
            match (0..n).find(|&j| table[i][j] == 0) {
                Some(j) if table[j][i] == 0 => inverse[i] = j,
                _ => return Err(Error::InvalidGroup(format!("element {i} has no inverse"))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails for ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let gens: Vec<(String, usize)> = if generators.is_empty() {
            (1..n).map(|i| (format!("g{i}"), i)).collect()
        } else {
            generators.to_vec()
        };
        if let Some((name, e)) = gens.iter().find(|(_, e)| *e >= n) {
            return Err(Error::InvalidGroup(format!("generator {name} names missing element {e}")));
        }
        let names: Vec<&str> = gens.iter().map(|(s, _)| s.as_str()).collect();
        let alphabet = Alphabet::new(&names)?;
        let letter_elem: Vec<usize> = alphabet
            .letters()
            .map(|l| {
                let e = gens[alphabet.generator_of(l)].1;
                if alphabet.is_positive(l) {
                    e
                } else {
                    inverse[e]
                }
            })
            .collect();

        let mut normal: Vec<Option<Word>> = vec![None; n];
        normal[0] = Some(Word::empty());
        let mut dfa = Dfa::for_alphabet(&alphabet, n, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            dfa.set_accepting(e, true);
            for l in alphabet.letters() {
                let f = table[e][letter_elem[l.index()]];
                if normal[f].is_none() {
                    let mut w = normal[e].clone().expect("visited");
                    w.push(l);
                    normal[f] = Some(w);
                    dfa.add_transition(e, l, f)?;
                    queue.push_back(f);
                }
            }
        }
        let normal: Vec<Word> = normal
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or_else(|| Error::NotGenerating(format!("element {i} is not reached by the generators"))))
            .collect::<Result<_>>()?;
        Ok(FiniteBackend {
            table,
            inverse,
            alphabet,
            letter_elem,
            normal,
            dfa: dfa.minimize(),
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn element(&self, w: &Word) -> usize {
        w.iter().fold(0, |e, l| self.table[e][self.letter_elem[l.index()]])
    }

    pub fn normal_form(&self, e: usize) -> &Word {
        &self.normal[e]
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse_of(&self, a: usize) -> usize {
        self.inverse[a]
    }
}

impl GroupBackend for FiniteBackend {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn canonical(&self, w: &Word) -> Word {
        self.normal[self.element(w)].clone()
    }

    fn canonical_language(&self) -> Language {
        Language::from_dfa(&self.alphabet, self.dfa.clone()).expect("own alphabet")
    }
}

/// Subgroup of a finite group; coset representatives are shortlex-least.
#[derive(Debug, Clone)]
pub struct FiniteSubgroup {
    parent: Arc<FiniteBackend>,
    gens: GeneratingSet,
    /// Coset index of each element.
    coset_of: Vec<usize>,
    reps: Vec<Word>,
    /// Shortlex-least `Y±` word for each member, indexed by element.
    express: Vec<Option<Word>>,
    dfa: Dfa,
}

impl FiniteSubgroup {
    pub fn new(parent: Arc<FiniteBackend>, gens: Vec<Word>) -> Result<Self> {
        Self::with_generators(parent, GeneratingSet::numbered("y", gens)?)
    }

    pub fn with_generators(parent: Arc<FiniteBackend>, gens: GeneratingSet) -> Result<Self> {
        let al = parent.alphabet().clone();
        if let Some(w) = gens.words().iter().find(|w| !al.contains_word(w)) {
            return Err(Error::AlphabetMismatch(format!("subgroup generator {w:?} is not over the parent alphabet")));
        }
        let n = parent.order();
        let ya = gens.alphabet().clone();
        let y_elem: Vec<usize> = ya
            .letters()
            .map(|l| parent.element(&gens.letter_word(&al, l)))
            .collect();
        let mut express: Vec<Option<Word>> = vec![None; n];
        express[0] = Some(Word::empty());
        let mut queue = VecDeque::from([0usize]);
        let mut members = Vec::new();
        while let Some(e) = queue.pop_front() {
            members.push(e);
            for l in ya.letters() {
                let f = parent.multiply(e, y_elem[l.index()]);
                if express[f].is_none() {
                    let mut w = express[e].clone().expect("visited");
                    w.push(l);
                    express[f] = Some(w);
                    queue.push_back(f);
                }
            }
        }

        // cosets H·g; breadth-first from H gives shortlex-least representatives
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        let mut firsts = Vec::new();
        let mut dfa = Dfa::for_alphabet(&al, n / members.len(), 0);
        let mark = |g: usize, idx: usize, coset_of: &mut Vec<usize>| {
            for &h in &members {
                coset_of[parent.multiply(h, g)] = idx;
            }
        };
        mark(0, 0, &mut coset_of);
        reps.push(Word::empty());
        firsts.push(0usize);
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            dfa.set_accepting(c, true);
            let g = firsts[c];
            for l in al.letters() {
                let f = parent.multiply(g, parent.letter_elem[l.index()]);
                if coset_of[f] == usize::MAX {
                    let idx = reps.len();
                    mark(f, idx, &mut coset_of);
                    let mut w = reps[c].clone();
                    w.push(l);
                    reps.push(w);
                    firsts.push(f);
                    dfa.add_transition(c, l, idx)?;
                    queue.push_back(idx);
                }
            }
        }
        Ok(FiniteSubgroup {
            parent,
            gens,
            coset_of,
            reps,
            express,
            dfa: dfa.minimize(),
        })
    }

    pub fn index(&self) -> usize {
        self.reps.len()
    }
}

impl SubgroupContext for FiniteSubgroup {
    fn parent(&self) -> &dyn GroupBackend {
        self.parent.as_ref()
    }

    fn generators(&self) -> &GeneratingSet {
        &self.gens
    }

    fn contains(&self, w: &Word) -> bool {
        self.express[self.parent.element(w)].is_some()
    }

    fn h_express(&self, w: &Word) -> Option<Word> {
        self.express[self.parent.element(w)].clone()
    }

    fn coset_rep(&self, w: &Word) -> Word {
        self.reps[self.coset_of[self.parent.element(w)]].clone()
    }

    fn coset_language(&self) -> Language {
        Language::from_dfa(self.parent.alphabet(), self.dfa.clone()).expect("own alphabet")
    }
}
