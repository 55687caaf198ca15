use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;

use super::lattice::Lattice;
use super::{block_dfa, GroupBackend, SubgroupContext};
use crate::error::{Error, Result};
use crate::fsa::{Dfa, Language, LazyLanguage};
use crate::word::{Alphabet, GeneratingSet, Letter, Word};

/// `Z^rank × Z/d_1 × ⋯ × Z/d_k` with one generator per factor.
#[derive(Debug, Clone)]
pub struct AbelianBackend {
    rank: usize,
    torsion: Vec<u64>,
    alphabet: Alphabet,
    dfa: Dfa,
}

impl AbelianBackend {
    /// Default names: `x` or `x1, x2, ...` for free factors, `t` or
    /// `t1, t2, ...` for torsion factors.
    pub fn new(rank: usize, torsion: &[u64]) -> Result<Self> {
        let numbered = |p: &str, n: usize| -> Vec<String> {
            if n == 1 {
                vec![p.to_string()]
            } else {
                (1..=n).map(|i| format!("{p}{i}")).collect()
            }
        };
        let mut names = numbered("x", rank);
        names.extend(numbered("t", torsion.len()));
        Self::with_names(rank, torsion, &names)
    }

    pub fn with_names<S: AsRef<str>>(rank: usize, torsion: &[u64], names: &[S]) -> Result<Self> {
        if let Some(d) = torsion.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidGroup(format!("torsion modulus {d} is below 2")));
        }
        if names.len() != rank + torsion.len() {
            return Err(Error::InvalidGroup(format!(
                "{} names for {} factors",
                names.len(),
                rank + torsion.len()
            )));
        }
        let alphabet = Alphabet::new(names)?;
        let blocks: Vec<(usize, Option<u64>)> = (0..rank)
            .map(|g| (g, None))
            .chain(torsion.iter().enumerate().map(|(i, &d)| (rank + i, Some(d))))
            .collect();
        let dfa = block_dfa(&alphabet, &blocks);
        Ok(AbelianBackend {
            rank,
            torsion: torsion.to_vec(),
            alphabet,
            dfa,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn dim(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Raw exponent sums, not reduced modulo torsion.
    pub fn exponents(&self, w: &Word) -> Vec<i64> {
        let mut v = vec![0i64; self.dim()];
        for l in w.iter() {
            let g = self.alphabet.generator_of(l);
            v[g] += if self.alphabet.is_positive(l) { 1 } else { -1 };
        }
        v
    }

    /// Torsion coordinates brought to the signed residue of least absolute
    /// value, ties positive.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut out = v.to_vec();
        for (i, &d) in self.torsion.iter().enumerate() {
            out[self.rank + i] = signed_residue(v[self.rank + i], d);
        }
        out
    }

    pub fn word_of(&self, v: &[i64]) -> Word {
        let mut w = Word::empty();
        for (g, &e) in self.reduce(v).iter().enumerate() {
            let pos = self.alphabet.generator(g);
            let l = if e >= 0 { pos } else { self.alphabet.inverse(pos) };
            for _ in 0..e.unsigned_abs() {
                w.push(l);
            }
        }
        w
    }

    fn relation_rows(&self) -> Vec<Vec<i64>> {
        self.torsion
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut r = vec![0; self.dim()];
                r[self.rank + i] = d as i64;
                r
            })
            .collect()
    }
}

fn signed_residue(e: i64, d: u64) -> i64 {
    let d = d as i64;
    let r = e.rem_euclid(d);
    if 2 * r > d {
        r - d
    } else {
        r
    }
}

impl GroupBackend for AbelianBackend {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn canonical(&self, w: &Word) -> Word {
        self.word_of(&self.exponents(w))
    }

    fn canonical_language(&self) -> Language {
        Language::from_dfa(&self.alphabet, self.dfa.clone()).expect("own alphabet")
    }
}

/// One quotient generator of `G/H`, lifted to the least letter mapping to it.
#[derive(Debug, Clone)]
struct QuotientBlock {
    generator: usize,
    order: Option<u64>,
}

#[derive(Debug)]
enum Quotient {
    /// Lifted quotient generators form a direct-sum basis of `G/H`.
    DirectSum {
        blocks: Vec<QuotientBlock>,
        solver: Lattice,
    },
    /// Shortlex breadth-first search in `G/H`, grown on demand.
    Search(RwLock<SearchCache>),
}

#[derive(Debug, Default)]
struct SearchCache {
    reps: HashMap<Vec<i64>, Word>,
    frontier: Vec<(Vec<i64>, Word)>,
    radius: usize,
}

/// A subgroup of an abelian backend. The coset language is the image under
/// the lift `ρ′` of the shortlex language of `G/H`, i.e. the shortlex-least
/// word of every right coset.
#[derive(Debug, Clone)]
pub struct AbelianSubgroup {
    inner: Arc<Inner>,
}

#[derive(Debug)]
struct Inner {
    parent: Arc<AbelianBackend>,
    gens: GeneratingSet,
    lattice: Lattice,
    /// Quotient letters in order: (image key, lifted letter).
    letters: Vec<(Vec<i64>, Letter)>,
    quotient: Quotient,
    dfa: Option<Dfa>,
}

impl AbelianSubgroup {
    /// Generators named `y1, y2, ...`.
    pub fn new(parent: Arc<AbelianBackend>, gens: Vec<Word>) -> Result<Self> {
        Self::with_generators(parent, GeneratingSet::numbered("y", gens)?)
    }

    pub fn with_generators(parent: Arc<AbelianBackend>, gens: GeneratingSet) -> Result<Self> {
        let al = parent.alphabet().clone();
        if let Some(w) = gens.words().iter().find(|w| !al.contains_word(w)) {
            return Err(Error::AlphabetMismatch(format!(
                "subgroup generator {w:?} is not over the parent alphabet"
            )));
        }
        let mut rows: Vec<Vec<i64>> = gens.words().iter().map(|w| parent.exponents(w)).collect();
        rows.extend(parent.relation_rows());
        let lattice = Lattice::new(&rows, parent.dim());
        let moduli = lattice.key_moduli();

        // distinct nonzero images of X±, each lifted to the least letter
        let mut letters: Vec<(Vec<i64>, Letter)> = Vec::new();
        let mut blocks: Vec<QuotientBlock> = Vec::new();
        let mut block_keys: Vec<Vec<i64>> = Vec::new();
        for l in al.letters() {
            let key = lattice.key(&parent.exponents(&Word::single(l)));
            if key.iter().all(|&c| c == 0) || letters.iter().any(|(k, _)| *k == key) {
                continue;
            }
            letters.push((key.clone(), l));
            let neg = negate(&key, &moduli);
            if al.is_positive(l) && !block_keys.iter().any(|k| *k == key || *k == neg) {
                blocks.push(QuotientBlock {
                    generator: al.generator_of(l),
                    order: element_order(&key, &moduli),
                });
                block_keys.push(key);
            }
        }

        let free_rank = moduli.iter().filter(|&&d| d == 0).count();
        let torsion_order: i64 = moduli.iter().filter(|&&d| d != 0).product();
        let infinite = blocks.iter().filter(|b| b.order.is_none()).count();
        let finite_product: u64 = blocks.iter().filter_map(|b| b.order).product();
        let direct_sum = infinite == free_rank && finite_product as i64 == torsion_order;

        let (quotient, dfa) = if direct_sum {
            let mut solver_rows = block_keys.clone();
            for (i, &d) in moduli.iter().enumerate() {
                if d != 0 {
                    let mut r = vec![0; moduli.len()];
                    r[i] = d;
                    solver_rows.push(r);
                }
            }
            let solver = Lattice::new(&solver_rows, moduli.len());
            let mut spec: Vec<(usize, Option<u64>)> =
                blocks.iter().map(|b| (b.generator, b.order)).collect();
            spec.sort_unstable();
            let dfa = block_dfa(&al, &spec);
            (Quotient::DirectSum { blocks, solver }, Some(dfa))
        } else {
            let cache = SearchCache {
                reps: HashMap::from([(vec![0; moduli.len()], Word::empty())]),
                frontier: vec![(vec![0; moduli.len()], Word::empty())],
                radius: 0,
            };
            (Quotient::Search(RwLock::new(cache)), None)
        };
        Ok(AbelianSubgroup {
            inner: Arc::new(Inner {
                parent,
                gens,
                lattice,
                letters,
                quotient,
                dfa,
            }),
        })
    }

    pub fn abelian_parent(&self) -> &Arc<AbelianBackend> {
        &self.inner.parent
    }

    /// Whether the coset language is an explicit automaton.
    pub fn has_dfa(&self) -> bool {
        self.inner.dfa.is_some()
    }
}

impl Inner {
    fn coset_rep(&self, w: &Word) -> Word {
        self.rep_for_key(&self.lattice.key(&self.parent.exponents(w)))
    }

    fn rep_for_key(&self, key: &[i64]) -> Word {
        match &self.quotient {
            Quotient::DirectSum { blocks, solver } => {
                let coeffs = solver.express(key).expect("lifted generators span G/H");
                let mut parts: Vec<(usize, Letter, u64)> = Vec::new();
                for (b, &c) in blocks.iter().zip(&coeffs) {
                    let c = match b.order {
                        Some(d) => signed_residue(c, d),
                        None => c,
                    };
                    if c != 0 {
                        let pos = self.parent.alphabet().generator(b.generator);
                        let l = if c > 0 { pos } else { self.parent.alphabet().inverse(pos) };
                        parts.push((b.generator, l, c.unsigned_abs()));
                    }
                }
                parts.sort_unstable();
                let mut w = Word::empty();
                for (_, l, n) in parts {
                    for _ in 0..n {
                        w.push(l);
                    }
                }
                w
            }
            Quotient::Search(cache) => {
                if let Some(w) = cache.read().reps.get(key) {
                    return w.clone();
                }
                let mut c = cache.write();
                loop {
                    if let Some(w) = c.reps.get(key) {
                        return w.clone();
                    }
                    self.grow(&mut c);
                }
            }
        }
    }

    fn grow(&self, c: &mut SearchCache) {
        let moduli = self.lattice.key_moduli();
        let mut next = Vec::new();
        for (k, w) in std::mem::take(&mut c.frontier) {
            for (lk, l) in &self.letters {
                let sum: Vec<i64> = k
                    .iter()
                    .zip(lk)
                    .zip(&moduli)
                    .map(|((a, b), &d)| if d == 0 { a + b } else { (a + b).rem_euclid(d) })
                    .collect();
                if !c.reps.contains_key(&sum) {
                    let mut v = w.clone();
                    v.push(*l);
                    c.reps.insert(sum.clone(), v.clone());
                    next.push((sum, v));
                }
            }
        }
        c.frontier = next;
        c.radius += 1;
    }

    fn search_enumerate(&self, n: usize) -> Vec<Word> {
        if let Quotient::Search(cache) = &self.quotient {
            let mut c = cache.write();
            while c.radius < n {
                self.grow(&mut c);
            }
            let mut out: Vec<Word> = c.reps.values().filter(|w| w.len() <= n).cloned().collect();
            out.sort();
            out
        } else {
            Vec::new()
        }
    }
}

fn negate(key: &[i64], moduli: &[i64]) -> Vec<i64> {
    key.iter()
        .zip(moduli)
        .map(|(&c, &d)| if d == 0 { -c } else { (-c).rem_euclid(d) })
        .collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn element_order(key: &[i64], moduli: &[i64]) -> Option<u64> {
    let mut order = 1i64;
    for (&c, &d) in key.iter().zip(moduli) {
        if d == 0 {
            if c != 0 {
                return None;
            }
        } else {
            let o = d / gcd(d, c);
            order = order / gcd(order, o) * o;
        }
    }
    Some(order as u64)
}

impl SubgroupContext for AbelianSubgroup {
    fn parent(&self) -> &dyn GroupBackend {
        self.inner.parent.as_ref()
    }

    fn generators(&self) -> &GeneratingSet {
        &self.inner.gens
    }

    fn contains(&self, w: &Word) -> bool {
        let inner = &self.inner;
        inner.lattice.contains(&inner.parent.exponents(w))
    }

    fn h_express(&self, w: &Word) -> Option<Word> {
        let inner = &self.inner;
        let coeffs = inner.lattice.express(&inner.parent.exponents(w))?;
        let ya = inner.gens.alphabet();
        let mut out = Word::empty();
        for (j, &c) in coeffs.iter().take(inner.gens.len()).enumerate() {
            out.extend_from(&ya.power(&Word::single(ya.generator(j)), c));
        }
        Some(out)
    }

    fn coset_rep(&self, w: &Word) -> Word {
        self.inner.coset_rep(w)
    }

    fn coset_language(&self) -> Language {
        let al = self.inner.parent.alphabet().clone();
        if let Some(dfa) = &self.inner.dfa {
            return Language::from_dfa(&al, dfa.clone()).expect("own alphabet");
        }
        let (a, b) = (self.inner.clone(), self.inner.clone());
        Language::Lazy(
            LazyLanguage::new(al, move |w| a.coset_rep(w) == *w)
                .prefix_closed(true)
                .with_enumerator(move |n| b.search_enumerate(n)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::super::decompose;
    use super::*;

    fn z2() -> Arc<AbelianBackend> {
        Arc::new(AbelianBackend::new(2, &[]).unwrap())
    }

    #[test]
    fn collects_exponents() {
        let g = z2();
        let al = g.alphabet().clone();
        assert_eq!(al.format(&g.canonical(&al.parse("x1 x2 x1").unwrap())), "x1 x1 x2");
        let t = AbelianBackend::new(0, &[4]).unwrap();
        let tl = t.alphabet().clone();
        assert_eq!(tl.format(&t.canonical(&tl.parse("t^3 t^2").unwrap())), "t");
        assert_eq!(tl.format(&t.canonical(&tl.parse("t^3").unwrap())), "t^-1");
        assert_eq!(tl.format(&t.canonical(&tl.parse("t^-2").unwrap())), "t t");
        let z = AbelianBackend::new(1, &[]).unwrap();
        assert_eq!(z.geodesic_length(&z.alphabet().parse("x x^-1").unwrap()), 0);
        assert!(AbelianBackend::new(1, &[1]).is_err());
    }

    #[test]
    fn diagonal_subgroup_example() {
        let g = z2();
        let al = g.alphabet().clone();
        let h = AbelianSubgroup::new(g.clone(), vec![al.parse("x1 x2").unwrap()]).unwrap();
        assert!(h.has_dfa());
        let w = al.parse("x1^2 x2^3").unwrap();
        let u = h.coset_rep(&w);
        assert_eq!(al.format(&u), "x1^-1");
        let (y, _) = decompose(&h, &w);
        assert_eq!(h.generators().alphabet().format(&y), "y1 y1 y1");
        assert!(h.coset_rep(&Word::empty()).is_empty());
    }

    #[test]
    fn axis_subgroup_language() {
        let g = z2();
        let al = g.alphabet().clone();
        let h = AbelianSubgroup::new(g, vec![al.parse("x1").unwrap()]).unwrap();
        let got = h.coset_language().enumerate(3);
        let want: Vec<Word> = ["", "x2", "x2^-1", "x2 x2", "x2^-1 x2^-1", "x2^3", "x2^-3"]
            .iter()
            .map(|s| al.parse(s).unwrap())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn non_basis_quotient_uses_search() {
        // Z²/⟨x1 x2^-2⟩ ≅ Z with x1 ↦ 2, x2 ↦ 1
        let g = z2();
        let al = g.alphabet().clone();
        let h = AbelianSubgroup::new(g.clone(), vec![al.parse("x1 x2^-2").unwrap()]).unwrap();
        assert!(!h.has_dfa());
        let rep = h.coset_rep(&al.parse("x2^5").unwrap());
        assert_eq!(al.format(&rep), "x1 x1 x2");
        check_coset_laws(&g, &h, 5);
    }

    #[test]
    fn mixed_torsion_subgroup() {
        let g = Arc::new(AbelianBackend::new(2, &[4]).unwrap());
        let al = g.alphabet().clone();
        let h = AbelianSubgroup::new(g.clone(), vec![al.parse("x1 t").unwrap()]).unwrap();
        assert!(h.has_dfa());
        check_coset_laws(&g, &h, 4);
    }

    /// Brute-force checks: coset reps are shortlex-least in their coset,
    /// constant on cosets, and the language is exactly the set of reps.
    fn check_coset_laws(g: &Arc<AbelianBackend>, h: &AbelianSubgroup, n: usize) {
        let al = g.alphabet().clone();
        let words = al.all_words(n);
        let mut reps = std::collections::BTreeSet::new();
        for w in &words {
            let u = h.coset_rep(w);
            let (y, _) = decompose(h, w);
            let back = h.generators().evaluate(&al, &y).concat(&u);
            assert!(g.equal(&back, w));
            // no shortlex-smaller word of the same coset among enumerated ones
            let uw = al.invert(&u);
            for v in words.iter().take_while(|v| **v < u) {
                assert!(!h.contains(&v.concat(&uw)), "{} beats {}", al.format(v), al.format(&u));
            }
            for y in h.generators().words() {
                assert_eq!(h.coset_rep(&y.concat(w)), u);
            }
            if u.len() <= n {
                reps.insert(u);
            }
        }
        let lang = h.coset_language();
        let got: Vec<Word> = lang.enumerate(n);
        let mut want: Vec<Word> = reps.into_iter().collect();
        want.retain(|u| u.len() <= n);
        // every rep found from words of length ≤ n has length ≤ n
        assert_eq!(got, want);
    }
}
