//! Generator alphabets and words over them.
//!
//! Letters are small integers. The index of a letter is its rank in the fixed
//! total order on `X±`, so shortlex comparison of two words is a comparison of
//! lengths followed by a lexicographic comparison of letter indices. Each
//! generator `x` contributes the letter `x` and, unless it is declared
//! self-inverse, the letter `x^-1` immediately after it.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a letter of `X±`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub u32);

impl Letter {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite word over some alphabet.
///
/// `Ord` is the shortlex order with respect to letter indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn single(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Prefix of length `min(t, |w|)`.
    pub fn prefix(&self, t: usize) -> Word {
        Word(self.0[..t.min(self.0.len())].to_vec())
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        self.0.iter().copied()
    }

    pub fn repeat(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// An inverse-closed generator alphabet `X±` with a fixed total order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    generators: Vec<String>,
    names: Vec<String>,
    inverse: Vec<Letter>,
    generator_of: Vec<usize>,
    positive: Vec<Letter>,
    lookup: HashMap<String, Letter>,
}

impl Alphabet {
    /// Alphabet with no self-inverse letters.
    pub fn new<S: AsRef<str>>(generators: &[S]) -> Result<Self> {
        let spec: Vec<(&str, bool)> = generators.iter().map(|g| (g.as_ref(), false)).collect();
        Self::with_involutions(&spec)
    }

    /// Each entry is `(name, self_inverse)`.
    pub fn with_involutions(generators: &[(&str, bool)]) -> Result<Self> {
        let mut a = Alphabet {
            generators: Vec::new(),
            names: Vec::new(),
            inverse: Vec::new(),
            generator_of: Vec::new(),
            positive: Vec::new(),
            lookup: HashMap::new(),
        };
        for (gi, &(name, self_inverse)) in generators.iter().enumerate() {
            if name.is_empty()
                || name == "ε"
                || name.chars().any(|c| c.is_whitespace() || c == '^' || c == ';' || c == '=')
            {
                return Err(Error::MalformedWord(format!("bad generator name `{name}`")));
            }
            if a.lookup.contains_key(name) {
                return Err(Error::InvalidGroup(format!("duplicate generator `{name}`")));
            }
            let pos = Letter(a.names.len() as u32);
            a.generators.push(name.to_string());
            a.names.push(name.to_string());
            a.generator_of.push(gi);
            a.positive.push(pos);
            a.lookup.insert(name.to_string(), pos);
            if self_inverse {
                a.inverse.push(pos);
            } else {
                let neg = Letter(a.names.len() as u32);
                a.inverse.push(neg);
                a.inverse.push(pos);
                let nname = format!("{name}^-1");
                a.names.push(nname.clone());
                a.generator_of.push(gi);
                a.lookup.insert(nname, neg);
            }
        }
        Ok(a)
    }

    /// Number of letters in `X±`.
    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generators
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.names.len() as u32).map(Letter)
    }

    /// Positive letter of generator `g`.
    pub fn generator(&self, g: usize) -> Letter {
        self.positive[g]
    }

    pub fn generator_of(&self, l: Letter) -> usize {
        self.generator_of[l.index()]
    }

    pub fn is_positive(&self, l: Letter) -> bool {
        self.positive[self.generator_of[l.index()]] == l
    }

    pub fn is_self_inverse(&self, l: Letter) -> bool {
        self.inverse[l.index()] == l
    }

    pub fn inverse(&self, l: Letter) -> Letter {
        self.inverse[l.index()]
    }

    pub fn name(&self, l: Letter) -> &str {
        &self.names[l.index()]
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.lookup.get(name).copied()
    }

    pub fn contains_word(&self, w: &Word) -> bool {
        w.iter().all(|l| l.index() < self.names.len())
    }

    fn check(&self, w: &Word) -> Result<()> {
        if self.contains_word(w) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(format!(
                "word has letters outside an alphabet of {} letters",
                self.size()
            )))
        }
    }

    /// Letterwise-inverted reversal.
    pub fn invert(&self, w: &Word) -> Word {
        w.letters().iter().rev().map(|&l| self.inverse(l)).collect()
    }

    /// Cancel adjacent inverse pairs until none remain.
    pub fn free_reduce(&self, w: &Word) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(w.len());
        for l in w.iter() {
            if out.last() == Some(&self.inverse(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn is_freely_reduced(&self, w: &Word) -> bool {
        w.letters().windows(2).all(|p| self.inverse(p[0]) != p[1])
    }

    pub fn shortlex_cmp(&self, a: &Word, b: &Word) -> Result<Ordering> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.cmp(b))
    }

    /// `w^n` for a signed exponent.
    pub fn power(&self, w: &Word, n: i64) -> Word {
        if n >= 0 {
            w.repeat(n as usize)
        } else {
            self.invert(w).repeat(n.unsigned_abs() as usize)
        }
    }

    /// Parse the display syntax: whitespace separated letter names, `^-1` for
    /// inverses, `ε` or the empty string for the empty word. As a convenience
    /// `x^k` expands to `k` copies of `x` (or of `x^-1` for negative `k`).
    pub fn parse(&self, s: &str) -> Result<Word> {
        let mut out = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "ε" {
                continue;
            }
            if let Some(l) = self.letter(tok) {
                out.push(l);
                continue;
            }
            let (base, exp) = match tok.rsplit_once('^') {
                Some((b, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::MalformedWord(tok.to_string()))?;
                    (b, e)
                }
                None => return Err(Error::UnknownLetter(tok.to_string())),
            };
            let l = self
                .letter(base)
                .ok_or_else(|| Error::UnknownLetter(base.to_string()))?;
            let l = if exp < 0 { self.inverse(l) } else { l };
            out.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
        }
        Ok(Word(out))
    }

    pub fn format(&self, w: &Word) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        let parts: Vec<&str> = w.iter().map(|l| self.name(l)).collect();
        parts.join(" ")
    }

    pub fn display<'a>(&'a self, w: &'a Word) -> DisplayWord<'a> {
        DisplayWord { alphabet: self, word: w }
    }

    /// All words of length at most `n`, in shortlex order.
    pub fn all_words(&self, n: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(layer.len() * self.size());
            for w in &layer {
                for l in self.letters() {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// All freely reduced words of length at most `n`, in shortlex order.
    pub fn reduced_words(&self, n: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &layer {
                for l in self.letters() {
                    if w.last().map(|p| self.inverse(p)) == Some(l) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

pub struct DisplayWord<'a> {
    alphabet: &'a Alphabet,
    word: &'a Word,
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alphabet.format(self.word))
    }
}

/// A finite list of named elements `Y`, each given as a word over an ambient
/// alphabet `X`. Words over `Y±` are words over [`GeneratingSet::alphabet`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingSet {
    alphabet: Alphabet,
    words: Vec<Word>,
}

impl GeneratingSet {
    pub fn new<S: AsRef<str>>(names: &[S], words: Vec<Word>) -> Result<Self> {
        if names.len() != words.len() {
            return Err(Error::InvalidSubgroup(
                "generator names and words differ in number".into(),
            ));
        }
        Ok(GeneratingSet {
            alphabet: Alphabet::new(names)?,
            words,
        })
    }

    /// Names `y1, y2, ...`.
    pub fn numbered(prefix: &str, words: Vec<Word>) -> Result<Self> {
        let names: Vec<String> = (1..=words.len()).map(|i| format!("{prefix}{i}")).collect();
        Self::new(&names, words)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Word over `X±` for one letter of `Y±`.
    pub fn letter_word(&self, ambient: &Alphabet, l: Letter) -> Word {
        let g = self.alphabet.generator_of(l);
        if self.alphabet.is_positive(l) {
            self.words[g].clone()
        } else {
            ambient.invert(&self.words[g])
        }
    }

    /// Substitute each `Y±` letter by its `X±` word.
    pub fn evaluate(&self, ambient: &Alphabet, w: &Word) -> Word {
        let mut out = Word::empty();
        for l in w.iter() {
            out.extend_from(&self.letter_word(ambient, l));
        }
        out
    }

    /// True when every generator is a single letter of `X`.
    pub fn single_letters(&self) -> Option<Vec<Letter>> {
        self.words
            .iter()
            .map(|w| if w.len() == 1 { w.first() } else { None })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Alphabet {
        Alphabet::new(&["x", "y", "z"]).unwrap()
    }

    #[test]
    fn invert_examples() {
        let a = xy();
        let w = a.parse("x y").unwrap();
        assert_eq!(a.format(&a.invert(&w)), "y^-1 x^-1");
        assert_eq!(a.invert(&Word::empty()), Word::empty());
        let w = a.parse("x x").unwrap();
        assert_eq!(a.format(&a.invert(&w)), "x^-1 x^-1");
    }

    #[test]
    fn free_reduce_examples() {
        let a = xy();
        let r = |s: &str| a.format(&a.free_reduce(&a.parse(s).unwrap()));
        assert_eq!(r("x x^-1 y"), "y");
        assert_eq!(r("ε"), "ε");
        assert_eq!(r("x y y^-1 x^-1"), "ε");
    }

    #[test]
    fn shortlex_examples() {
        let a = xy();
        let p = |s: &str| a.parse(s).unwrap();
        assert_eq!(a.shortlex_cmp(&p("x"), &p("y")).unwrap(), Ordering::Less);
        assert_eq!(a.shortlex_cmp(&p("x y"), &p("x")).unwrap(), Ordering::Greater);
        assert_eq!(a.shortlex_cmp(&p("x y"), &p("x x")).unwrap(), Ordering::Greater);
        // x < x^-1 < y < y^-1
        assert_eq!(a.shortlex_cmp(&p("x^-1"), &p("y")).unwrap(), Ordering::Less);
    }

    #[test]
    fn shortlex_rejects_foreign_letters() {
        let small = Alphabet::new(&["x"]).unwrap();
        let w = xy().parse("z").unwrap();
        assert!(matches!(
            small.shortlex_cmp(&w, &Word::empty()),
            Err(Error::AlphabetMismatch(_))
        ));
    }

    #[test]
    fn prefix_examples() {
        let a = xy();
        let w = a.parse("x y z").unwrap();
        assert_eq!(a.format(&w.prefix(2)), "x y");
        let w = a.parse("x y").unwrap();
        assert_eq!(w.prefix(5), w);
        assert_eq!(Word::empty().prefix(0), Word::empty());
    }

    #[test]
    fn parse_powers_and_epsilon() {
        let a = xy();
        assert_eq!(a.format(&a.parse("x^3 y^-2").unwrap()), "x x x y^-1 y^-1");
        assert_eq!(a.parse("").unwrap(), Word::empty());
        assert_eq!(a.parse("ε").unwrap(), Word::empty());
        assert!(matches!(a.parse("q"), Err(Error::UnknownLetter(_))));
    }

    #[test]
    fn self_inverse_letters() {
        let a = Alphabet::with_involutions(&[("s", true), ("r", false)]).unwrap();
        assert_eq!(a.size(), 3);
        let s = a.letter("s").unwrap();
        assert!(a.is_self_inverse(s));
        assert_eq!(a.free_reduce(&a.parse("s s r").unwrap()), a.parse("r").unwrap());
    }

    #[test]
    fn all_words_is_shortlex_sorted() {
        let a = Alphabet::new(&["x"]).unwrap();
        let ws = a.all_words(2);
        assert_eq!(ws.len(), 1 + 2 + 4);
        assert!(ws.windows(2).all(|p| p[0] < p[1]));
    }
}
