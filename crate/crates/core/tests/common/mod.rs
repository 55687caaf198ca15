//! Oracles and property checks shared by the integration test targets.
//! Nothing here calls into the library's normal form machinery.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use higgins_core::backend::{AbelianBackend, FiniteBackend, FreeBackend, GroupBackend};
use higgins_core::certify::{async_fellow_distance, sync_fellow_distance, FellowMetric};
use higgins_core::fsa::Dfa;
use higgins_core::word::{Alphabet, Letter, Word};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

/// Free group words: `±k` is `f_k^{±1}`.
pub type FWord = Vec<i8>;

fn push_reduced(out: &mut FWord, x: i8) {
    if out.last() == Some(&-x) {
        out.pop();
    } else {
        out.push(x);
    }
}

pub fn free_reduce(w: &[i8]) -> FWord {
    let mut out = Vec::new();
    for &x in w {
        push_reduced(&mut out, x);
    }
    out
}

/// Automorphisms of F3 by the images of f1, f2, f3.
pub type Auto = [FWord; 3];

fn substitute(w: &[i8], phi: &Auto) -> FWord {
    let mut out = Vec::new();
    for &x in w {
        let img = &phi[x.unsigned_abs() as usize - 1];
        if x > 0 {
            img.iter().for_each(|&y| push_reduced(&mut out, y));
        } else {
            img.iter().rev().for_each(|&y| push_reduced(&mut out, -y));
        }
    }
    out
}

/// `σ1, σ1⁻¹, σ2, σ2⁻¹` in the Artin representation.
fn sigma(i: usize, positive: bool) -> Auto {
    match (i, positive) {
        (1, true) => [vec![1, 2, -1], vec![1], vec![3]],
        (1, false) => [vec![2], vec![-2, 1, 2], vec![3]],
        (2, true) => [vec![1], vec![2, 3, -2], vec![2]],
        (2, false) => [vec![1], vec![3], vec![-3, 2, 3]],
        _ => unreachable!(),
    }
}

fn identity() -> Auto {
    [vec![1], vec![2], vec![3]]
}

/// Image of a braid word, `(generator, positive)` per letter.
pub fn braid_image(word: impl IntoIterator<Item = (usize, bool)>) -> Auto {
    let mut phi = identity();
    for (i, pos) in word {
        let s = sigma(i, pos);
        phi = [substitute(&s[0], &phi), substitute(&s[1], &phi), substitute(&s[2], &phi)];
    }
    phi
}

/// `a = σ1σ2σ1`, `b = σ1σ2` for words over `a±, b±` given as
/// `(is_a, positive)`.
pub fn trefoil_image(word: impl IntoIterator<Item = (bool, bool)>) -> Auto {
    let mut braid = Vec::new();
    for (is_a, pos) in word {
        let mut s: Vec<usize> = if is_a { vec![1, 2, 1] } else { vec![1, 2] };
        if !pos {
            s.reverse();
        }
        braid.extend(s.into_iter().map(|i| (i, pos)));
    }
    braid_image(braid)
}

/// Decode a word over an alphabet whose generators end in `a` or `b`.
pub fn ab_letters(al: &Alphabet, w: &Word) -> Vec<(bool, bool)> {
    w.iter()
        .map(|l| {
            let name = &al.generator_names()[al.generator_of(l)];
            (name.ends_with('a'), al.is_positive(l))
        })
        .collect()
}

/// `Z × F(x2, t)`: the HNN extension of `Z²` over `⟨x1⟩` by the identity.
/// Generators are located by suffix: `x1`, `x2` and anything else is `t`.
pub fn hnn_image(al: &Alphabet, w: &Word) -> (i64, FWord) {
    let mut x1 = 0;
    let mut free = Vec::new();
    for l in w.iter() {
        let name = &al.generator_names()[al.generator_of(l)];
        let s: i8 = if al.is_positive(l) { 1 } else { -1 };
        if name.ends_with("x1") {
            x1 += i64::from(s);
        } else if name.ends_with("x2") {
            push_reduced(&mut free, s);
        } else {
            push_reduced(&mut free, 2 * s);
        }
    }
    (x1, free)
}

/// Signed letters `±(g+1)` of a word.
pub fn signed(al: &Alphabet, w: &Word) -> FWord {
    w.iter()
        .map(|l| {
            let g = al.generator_of(l) as i8 + 1;
            if al.is_positive(l) {
                g
            } else {
                -g
            }
        })
        .collect()
}

/// Exponent vector modulo the torsion of the trailing factors.
pub fn abelian_image(al: &Alphabet, w: &Word, rank: usize, torsion: &[i64]) -> Vec<i64> {
    let mut v = vec![0i64; rank + torsion.len()];
    for l in w.iter() {
        v[al.generator_of(l)] += if al.is_positive(l) { 1 } else { -1 };
    }
    for (i, &d) in torsion.iter().enumerate() {
        v[rank + i] = v[rank + i].rem_euclid(d);
    }
    v
}

/// True when `key` and `word` induce the same partition of `words`, i.e.
/// equal keys exactly when equal oracle values.
pub fn same_partition<K, V>(items: impl IntoIterator<Item = (K, V)>) -> Result<(), String>
where
    K: std::hash::Hash + Eq + Clone + std::fmt::Debug,
    V: std::hash::Hash + Eq + Clone + std::fmt::Debug,
{
    let mut by_key: HashMap<K, V> = HashMap::new();
    let mut by_val: HashMap<V, K> = HashMap::new();
    for (k, v) in items {
        if let Some(old) = by_key.insert(k.clone(), v.clone()) {
            if old != v {
                return Err(format!("key {k:?} joins oracle values {old:?} and {v:?}"));
            }
        }
        if let Some(old) = by_val.insert(v.clone(), k.clone()) {
            if old != k {
                return Err(format!("oracle value {v:?} split into {old:?} and {k:?}"));
            }
        }
    }
    Ok(())
}

/// Every word of length at most `n` over letters `0..k`.
pub fn all_words(k: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..k {
                let mut v = w.clone();
                v.push(Letter(a as u32));
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Min over monotone staircases of the max distance, by listing paths.
pub fn brute_async(m: &FellowMetric<'_>, w1: &Word, h: &Word, w2: &Word) -> Option<usize> {
    fn go(m: &FellowMetric<'_>, w1: &Word, h: &Word, w2: &Word, i: usize, j: usize, acc: usize) -> Option<usize> {
        let d = m.distance(&w1.prefix(i), &h.concat(&w2.prefix(j)))?;
        let acc = acc.max(d);
        if i == w1.len() && j == w2.len() {
            return Some(acc);
        }
        let mut best: Option<usize> = None;
        for (di, dj) in [(1, 0), (0, 1), (1, 1)] {
            if i + di <= w1.len() && j + dj <= w2.len() {
                if let Some(k) = go(m, w1, h, w2, i + di, j + dj, acc) {
                    best = Some(best.map_or(k, |b| b.min(k)));
                }
            }
        }
        best
    }
    go(m, w1, h, w2, 0, 0, 0)
}

pub fn check_fellow_dp(m: &FellowMetric<'_>, w1: &Word, h: &Word, w2: &Word) -> Result<(), TestCaseError> {
    let a = async_fellow_distance(m, w1, h, w2);
    prop_assert_eq!(a, brute_async(m, w1, h, w2));
    if let (Some(a), Some(s)) = (a, sync_fellow_distance(m, w1, h, w2)) {
        prop_assert!(a <= s, "async {} above sync {}", a, s);
    }
    Ok(())
}

/// A random partial DFA over two letters with at most six states.
#[derive(Debug, Clone)]
pub struct DfaSpec {
    pub states: usize,
    pub trans: Vec<Option<usize>>,
    pub accept: Vec<bool>,
}

impl DfaSpec {
    pub fn build(&self) -> Dfa {
        let mut d = Dfa::new(vec!["a".into(), "b".into()], self.states, 0);
        for s in 0..self.states {
            d.set_accepting(s, self.accept[s]);
            for a in 0..2 {
                if let Some(t) = self.trans[2 * s + a] {
                    d.add_transition(s, Letter(a as u32), t).unwrap();
                }
            }
        }
        d
    }
}

pub fn dfa_spec() -> impl Strategy<Value = DfaSpec> {
    (1usize..=6).prop_flat_map(|n| {
        (
            Just(n),
            proptest::collection::vec(proptest::option::weighted(0.85, 0..n), 2 * n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(|(states, trans, accept)| DfaSpec { states, trans, accept })
    })
}

/// Brute-force reference for acceptance: walk the raw table.
fn accepts(spec: &DfaSpec, w: &Word) -> bool {
    let mut s = 0;
    for l in w.iter() {
        match spec.trans[2 * s + l.index()] {
            Some(t) => s = t,
            None => return false,
        }
    }
    spec.accept[s]
}

pub fn check_minimize(spec: &DfaSpec) -> Result<(), TestCaseError> {
    let d = spec.build();
    let m = d.minimize();
    prop_assert_eq!(m.minimize().to_text("m"), m.to_text("m"));
    let expected: Vec<Word> = all_words(2, 8).into_iter().filter(|w| accepts(spec, w)).collect();
    prop_assert_eq!(d.enumerate(8), expected.clone());
    prop_assert_eq!(m.enumerate(8), expected);
    Ok(())
}

pub fn check_boolean_ops(a: &DfaSpec, b: &DfaSpec) -> Result<(), TestCaseError> {
    let (da, db) = (a.build(), b.build());
    let words = all_words(2, 8);
    let pick = |f: &dyn Fn(bool, bool) -> bool| -> Vec<Word> {
        words.iter().filter(|w| f(accepts(a, w), accepts(b, w))).cloned().collect()
    };
    prop_assert_eq!(da.intersect(&db).unwrap().enumerate(8), pick(&|x, y| x && y));
    prop_assert_eq!(da.union(&db).unwrap().enumerate(8), pick(&|x, y| x || y));
    prop_assert_eq!(da.difference(&db).unwrap().enumerate(8), pick(&|x, y| x && !y));
    prop_assert_eq!(da.complement().enumerate(8), pick(&|x, _| !x));
    let concat = da.concat(&db).unwrap();
    for w in &words {
        let split = (0..=w.len()).any(|i| {
            let (p, q) = w.letters().split_at(i);
            accepts(a, &Word::from_letters(p.to_vec())) && accepts(b, &Word::from_letters(q.to_vec()))
        });
        prop_assert_eq!(concat.accepts(w), split, "concat on {:?}", w);
    }
    Ok(())
}

pub fn word(k: usize, max: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(0..k as u32, 0..=max)
        .prop_map(|v| Word::from_letters(v.into_iter().map(Letter).collect()))
}

pub fn check_word_laws(al: &Alphabet, u: &Word, v: &Word, w: &Word) -> Result<(), TestCaseError> {
    use std::cmp::Ordering;
    let cmp = |x: &Word, y: &Word| al.shortlex_cmp(x, y).unwrap();
    prop_assert_eq!(cmp(u, v), cmp(v, u).reverse());
    prop_assert_eq!(cmp(u, v) == Ordering::Equal, u == v);
    if cmp(u, v) != Ordering::Greater && cmp(v, w) != Ordering::Greater {
        prop_assert!(cmp(u, w) != Ordering::Greater);
    }
    if u.len() < v.len() {
        prop_assert_eq!(cmp(u, v), Ordering::Less);
    }
    // Shortlex is compatible with prefixing.
    prop_assert_eq!(cmp(&w.concat(u), &w.concat(v)), cmp(u, v));

    let r = al.free_reduce(u);
    prop_assert!(al.is_freely_reduced(&r));
    prop_assert_eq!(&al.free_reduce(&r), &r);
    prop_assert_eq!(signed(al, &r), free_reduce(&signed(al, u)));
    prop_assert_eq!(al.invert(&al.invert(u)), u.clone());
    prop_assert!(al.free_reduce(&u.concat(&al.invert(u))).is_empty());
    prop_assert_eq!(
        al.free_reduce(&u.concat(v)),
        al.free_reduce(&al.free_reduce(u).concat(&al.free_reduce(v)))
    );
    Ok(())
}

/// The symmetric group on three points, elements as permutations of
/// `0..3` in lexicographic order, `(p·q)(i) = q(p(i))`.
pub fn s3_table() -> (Vec<[usize; 3]>, Vec<Vec<usize>>) {
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
    let table = perms
        .iter()
        .map(|p| perms.iter().map(|q| index([q[p[0]], q[p[1]], q[p[2]]])).collect())
        .collect();
    (perms, table)
}

/// Canonical forms keep the element and separate distinct elements, over
/// all words of length at most `n`.
pub fn canonical_partition<V>(g: &dyn GroupBackend, n: usize, oracle: impl Fn(&Word) -> V) -> Result<usize, String>
where
    V: std::hash::Hash + Eq + Clone + std::fmt::Debug,
{
    let al = g.alphabet();
    let words = al.all_words(n);
    let mut items = Vec::with_capacity(words.len());
    for w in &words {
        let c = g.canonical(w);
        if oracle(&c) != oracle(w) {
            return Err(format!("canonical form of {} is another element", al.format(w)));
        }
        items.push((c, oracle(w)));
    }
    same_partition(items)?;
    Ok(words.len())
}

pub fn abelian_canonical(n: usize) -> Result<usize, String> {
    let g = AbelianBackend::new(2, &[3]).unwrap();
    canonical_partition(&g, n, |w| abelian_image(g.alphabet(), w, 2, &[3]))
}

pub fn free_canonical(n: usize) -> Result<usize, String> {
    let g = FreeBackend::new(2).unwrap();
    canonical_partition(&g, n, |w| free_reduce(&signed(g.alphabet(), w)))
}

pub fn finite_canonical(n: usize) -> Result<usize, String> {
    let (perms, table) = s3_table();
    // A transposition and a 3-cycle.
    let gens = [("s".to_string(), 1), ("r".to_string(), 3)];
    let g = Arc::new(FiniteBackend::new(table, &gens).unwrap());
    let al = g.alphabet().clone();
    let eval = |w: &Word| {
        let mut p = [0, 1, 2];
        for l in w.iter() {
            let q = perms[gens[al.generator_of(l)].1];
            let q = if al.is_positive(l) {
                q
            } else {
                let mut inv = [0; 3];
                (0..3).for_each(|i| inv[q[i]] = i);
                inv
            };
            p = [q[p[0]], q[p[1]], q[p[2]]];
        }
        p
    };
    let count = canonical_partition(g.as_ref(), n, eval)?;
    if g.ball(n).len() != 6 {
        return Err("S3 ball does not have 6 elements".into());
    }
    Ok(count)
}
