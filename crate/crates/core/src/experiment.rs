//! The trefoil crossover experiment.
//!
//! `G = ⟨x, y | xyx = yxy⟩` is realized as the amalgam `⟨a, b | a² = b³⟩`
//! with `a = xyx`, `b = xy`, so `x = b⁻¹a` and `d = (xyx)² = a²`. The
//! subgroup `H = ⟨x, d⟩` contains the centre `⟨d⟩`, which is the kernel of
//! `G → Q = Z/2 * Z/3`, so `H` is the full preimage of the infinite cyclic
//! `⟨x̄⟩ ≤ Q` and cosets of `H` are cosets of `⟨x̄⟩` in `Q`.
//!
//! Coset representatives are the shortlex-least words over the chosen
//! generators, found by breadth-first search through `Q`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::backend::{AbelianBackend, AbelianSubgroup, GroupBackend, SubgroupContext};
use crate::coset::{check_limited_crossover, CosetSystem, CrossoverWitness, Mode};
use crate::ball::SharedBall;
use crate::error::Result;
use crate::fsa::{Language, LazyLanguage};
use crate::gog::{EdgeSpec, GraphOfGroups};
use crate::higgins::{Pi1, Pi1Group};
use crate::word::{Alphabet, GeneratingSet, Letter, Word};

/// `⟨a, b | a² = b³⟩` as two infinite cyclic vertex groups `A = ⟨a⟩`,
/// `B = ⟨b⟩` joined by an edge `e` with `G_e = ⟨b³⟩`, `G_ē = ⟨a²⟩`.
pub fn trefoil_amalgam() -> Result<Pi1> {
    let a = Arc::new(AbelianBackend::with_names(1, &[], &["a"])?);
    let b = Arc::new(AbelianBackend::with_names(1, &[], &["b"])?);
    let sub_b = AbelianSubgroup::new(b.clone(), vec![b.alphabet().parse("b^3")?])?;
    let sub_a = AbelianSubgroup::new(a.clone(), vec![a.alphabet().parse("a^2")?])?;
    let y = sub_a.generators().alphabet().parse("y1")?;
    let mut gog = GraphOfGroups::new();
    gog.add_vertex("A", a)?;
    gog.add_vertex("B", b)?;
    gog.add_edge(EdgeSpec {
        name: "e".into(),
        from: 0,
        to: 1,
        subgroup: Arc::new(sub_b),
        reverse_subgroup: Arc::new(sub_a),
        iso: vec![y],
        reverse_name: None,
        reverse_iso: None,
    })?;
    Pi1::with_default_tree(Arc::new(gog))
}

/// Generating set for the trefoil group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrefoilGenerators {
    /// `{x, y}` from `⟨x, y | xyx = yxy⟩`.
    Braid,
    /// `{a, b}` from `⟨a, b | a² = b³⟩`.
    Amalgam,
}

impl fmt::Display for TrefoilGenerators {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrefoilGenerators::Braid => "xy",
            TrefoilGenerators::Amalgam => "ab",
        })
    }
}

/// The trefoil group over either generating set. Canonical words are the
/// Higgins normal forms of the amalgam, rewritten over the chosen alphabet.
#[derive(Debug)]
pub struct TrefoilGroup {
    inner: Pi1Group,
    gens: TrefoilGenerators,
    alphabet: Alphabet,
    /// Image of each positive generator as an amalgam word.
    to_amalgam: Vec<Word>,
    /// `a` and `b` as words over `alphabet`.
    from_amalgam: Vec<Word>,
    ball: SharedBall,
}

impl TrefoilGroup {
    pub fn new(gens: TrefoilGenerators) -> Result<Self> {
        let pi1 = Arc::new(trefoil_amalgam()?);
        // the deflated alphabet is `A.a, B.b`, so generator 0 is a, 1 is b
        let (alphabet, to_amalgam, from_amalgam) = match gens {
            TrefoilGenerators::Amalgam => {
                let al = Alphabet::new(&["a", "b"])?;
                let id = al.letters().filter(|&l| al.is_positive(l)).map(Word::single).collect::<Vec<_>>();
                (al, id.clone(), id)
            }
            TrefoilGenerators::Braid => {
                let al = Alphabet::new(&["x", "y"])?;
                let to = vec![pi1.parse("b^-1 a")?, pi1.parse("a^-1 b b")?];
                let from = vec![al.parse("x y x")?, al.parse("x y")?];
                (al, to, from)
            }
        };
        Ok(TrefoilGroup {
            inner: Pi1Group::new(pi1, 0)?,
            gens,
            alphabet,
            to_amalgam,
            from_amalgam,
            ball: SharedBall::new(),
        })
    }

    pub fn generators(&self) -> TrefoilGenerators {
        self.gens
    }

    /// `w` as a word over the amalgam generators `a, b`.
    pub fn amalgam_word(&self, w: &Word) -> Word {
        let am = self.inner.alphabet();
        let mut out = Word::empty();
        for l in w.iter() {
            let img = &self.to_amalgam[self.alphabet.generator_of(l)];
            if self.alphabet.is_positive(l) {
                out.extend_from(img);
            } else {
                out.extend_from(&am.invert(img));
            }
        }
        out
    }

    /// The amalgam alphabet `a, b` (as `A.a, B.b`).
    pub fn amalgam_alphabet(&self) -> &Alphabet {
        self.inner.alphabet()
    }

    fn rewrite(&self, amalgam_word: &Word) -> Word {
        let am = self.inner.alphabet();
        let mut out = Word::empty();
        for l in amalgam_word.iter() {
            let img = &self.from_amalgam[am.generator_of(l)];
            if am.is_positive(l) {
                out.extend_from(img);
            } else {
                out.extend_from(&self.alphabet.invert(img));
            }
        }
        out
    }
}

impl GroupBackend for TrefoilGroup {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn canonical(&self, w: &Word) -> Word {
        self.alphabet
            .free_reduce(&self.rewrite(&self.inner.canonical(&self.amalgam_word(w))))
    }

    fn geodesic_length(&self, w: &Word) -> usize {
        self.geodesic_length_within(w, usize::MAX)
            .expect("every element has a finite length")
    }

    fn geodesic_length_within(&self, w: &Word, cap: usize) -> Option<usize> {
        self.ball.distance_within(self, &self.canonical(w), cap)
    }

    fn canonical_language(&self) -> Language {
        let group = Self::new(self.generators()).expect("constructed before");
        Language::Lazy(LazyLanguage::new(self.alphabet.clone(), move |w| group.canonical(w) == *w))
    }
}

/// A syllable of `Z/2 * Z/3`: `ā`, `b̄` or `b̄²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Syllable {
    A,
    B,
    B2,
}

/// Free-product normal form in `Q = Z/2 * Z/3` of a word over `{a±, b±}`
/// (generator 0 is `a`).
pub fn quotient_form(al: &Alphabet, w: &Word) -> Vec<Syllable> {
    let mut out = Vec::new();
    for l in w.iter() {
        let s = match (al.generator_of(l), al.is_positive(l)) {
            (0, _) => Syllable::A,
            (_, true) => Syllable::B,
            (_, false) => Syllable::B2,
        };
        push_syllable(&mut out, s);
    }
    out
}

fn b_exponent(s: Syllable) -> u8 {
    match s {
        Syllable::A => 0,
        Syllable::B => 1,
        Syllable::B2 => 2,
    }
}

fn push_syllable(out: &mut Vec<Syllable>, s: Syllable) {
    match (out.last().copied(), s) {
        (Some(Syllable::A), Syllable::A) => {
            out.pop();
        }
        (Some(t), _) if t != Syllable::A && s != Syllable::A => {
            out.pop();
            match (b_exponent(t) + b_exponent(s)) % 3 {
                1 => out.push(Syllable::B),
                2 => out.push(Syllable::B2),
                _ => {}
            }
        }
        _ => out.push(s),
    }
}

/// `x̄ⁿ` in `Q`; `x̄ = b̄⁻¹ā`.
fn x_power(n: i64) -> Vec<Syllable> {
    let unit = if n >= 0 { [Syllable::B2, Syllable::A] } else { [Syllable::A, Syllable::B] };
    unit.iter().copied().cycle().take(2 * n.unsigned_abs() as usize).collect()
}

fn times(p: &[Syllable], q: &[Syllable]) -> Vec<Syllable> {
    let mut out = p.to_vec();
    for &s in q {
        push_syllable(&mut out, s);
    }
    out
}

/// A canonical element of `⟨x̄⟩·q`: least by length, then syllable order.
/// Since `|x̄ⁿq| ≥ 2|n| - |q|`, powers with `|n| > |q|` never win.
fn coset_key(q: &[Syllable]) -> Vec<Syllable> {
    let bound = q.len() as i64;
    (-bound..=bound)
        .map(|n| times(&x_power(n), q))
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
        .expect("nonempty range")
}

/// Breadth-first search through `Q` in shortlex order of words, recording
/// the first word met in each coset of `⟨x̄⟩`.
#[derive(Debug)]
struct CosetSearch {
    frontier: Vec<(Vec<Syllable>, Word)>,
    seen: HashSet<Vec<Syllable>>,
    reps: HashMap<Vec<Syllable>, Word>,
    radius: usize,
}

impl CosetSearch {
    fn new() -> Self {
        CosetSearch {
            frontier: vec![(Vec::new(), Word::empty())],
            seen: HashSet::from([Vec::new()]),
            reps: HashMap::from([(Vec::new(), Word::empty())]),
            radius: 0,
        }
    }

    fn grow(&mut self, letters: &[(Letter, Vec<Syllable>)]) {
        let mut next = Vec::new();
        for (q, w) in &self.frontier {
            for (l, img) in letters {
                let q2 = times(q, img);
                if self.seen.insert(q2.clone()) {
                    let mut w2 = w.clone();
                    w2.push(*l);
                    self.reps.entry(coset_key(&q2)).or_insert_with(|| w2.clone());
                    next.push((q2, w2));
                }
            }
        }
        self.frontier = next;
        self.radius += 1;
    }
}

/// `H = ⟨x, d⟩` in the trefoil group with shortlex-least coset
/// representatives.
#[derive(Debug)]
pub struct TrefoilCoset {
    group: Arc<TrefoilGroup>,
    gens: GeneratingSet,
    /// Image in `Q` of every letter, in letter order.
    letters: Vec<(Letter, Vec<Syllable>)>,
    search: RwLock<CosetSearch>,
}

impl TrefoilCoset {
    pub fn new(group: Arc<TrefoilGroup>) -> Result<Self> {
        let al = group.alphabet().clone();
        let x = match group.generators() {
            TrefoilGenerators::Braid => al.parse("x")?,
            TrefoilGenerators::Amalgam => al.parse("b^-1 a")?,
        };
        let d = group.rewrite(&group.amalgam_alphabet().parse("A.a A.a")?);
        let gens = GeneratingSet::new(&["x", "d"], vec![x, d])?;
        let am = group.amalgam_alphabet().clone();
        let letters = al
            .letters()
            .map(|l| (l, quotient_form(&am, &group.amalgam_word(&Word::single(l)))))
            .collect();
        Ok(TrefoilCoset {
            group,
            gens,
            letters,
            search: RwLock::new(CosetSearch::new()),
        })
    }

    fn key(&self, w: &Word) -> Vec<Syllable> {
        let am = self.group.amalgam_alphabet();
        coset_key(&quotient_form(am, &self.group.amalgam_word(w)))
    }
}

impl SubgroupContext for TrefoilCoset {
    fn parent(&self) -> &dyn GroupBackend {
        self.group.as_ref()
    }

    fn generators(&self) -> &GeneratingSet {
        &self.gens
    }

    /// `w = xⁿ dᵏ`: `n` from the image in `Q`, then `k` from the
    /// abelianization `a ↦ 3, b ↦ 2` (so `x ↦ 1`, `d ↦ 6`).
    fn h_express(&self, w: &Word) -> Option<Word> {
        let am = self.group.amalgam_alphabet();
        let aw = self.group.amalgam_word(w);
        let q = quotient_form(am, &aw);
        let half = q.len() as i64 / 2;
        let n = if q.is_empty() {
            0
        } else if q == x_power(half) {
            half
        } else if q == x_power(-half) {
            -half
        } else {
            return None;
        };
        let ab: i64 = aw
            .iter()
            .map(|l| {
                let v = if am.generator_of(l) == 0 { 3 } else { 2 };
                if am.is_positive(l) {
                    v
                } else {
                    -v
                }
            })
            .sum();
        let k = (ab - n) / 6;
        let ya = self.gens.alphabet();
        let (x, d) = (Word::single(ya.generator(0)), Word::single(ya.generator(1)));
        Some(ya.power(&x, n).concat(&ya.power(&d, k)))
    }

    fn coset_rep(&self, w: &Word) -> Word {
        let key = self.key(w);
        if let Some(r) = self.search.read().reps.get(&key) {
            return r.clone();
        }
        let mut search = self.search.write();
        loop {
            if let Some(r) = search.reps.get(&key) {
                return r.clone();
            }
            // w itself lies in the coset, so this stops by radius |w|
            search.grow(&self.letters);
        }
    }

    fn contains(&self, w: &Word) -> bool {
        self.key(w).is_empty()
    }

    fn coset_language(&self) -> Language {
        let ctx = Self::new(self.group.clone()).expect("constructed before");
        // prefixes of shortlex-least representatives are again least
        Language::Lazy(
            LazyLanguage::new(self.group.alphabet().clone(), move |w| ctx.coset_rep(w) == *w).prefix_closed(true),
        )
    }
}

/// Result of the limited-crossover sweep at one `λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaRow {
    pub lambda: usize,
    pub tested: usize,
    pub violations: usize,
    pub first: Option<CrossoverWitness>,
    /// `λ ≥ r`: the sweep cannot separate the constant from the radius.
    pub saturated: bool,
}

#[derive(Debug, Clone)]
pub struct TrefoilExperiment {
    pub generators: TrefoilGenerators,
    pub radius: usize,
    pub lambda_max: usize,
    pub rows: Vec<LambdaRow>,
    alphabet: Alphabet,
}

impl TrefoilExperiment {
    /// The least `λ` whose sweep found no witnesses.
    pub fn min_lambda(&self) -> Option<usize> {
        self.rows.iter().find(|r| r.violations == 0).map(|r| r.lambda)
    }

    /// No representative pair was tested at all.
    pub fn inconclusive(&self) -> bool {
        self.rows.iter().all(|r| r.tested == 0)
    }
}

impl fmt::Display for TrefoilExperiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "experiment=trefoil-crossover")?;
        writeln!(f, "generators={}", self.generators)?;
        writeln!(f, "representatives=shortlex-least")?;
        writeln!(f, "radius={}", self.radius)?;
        writeln!(f, "lambda_max={}", self.lambda_max)?;
        for r in &self.rows {
            let status = match (r.violations, r.saturated) {
                (_, _) if r.tested == 0 => "inconclusive",
                (0, true) => "pass-saturated",
                (0, false) => "pass",
                (_, true) => "fail-saturated",
                _ => "fail",
            };
            writeln!(
                f,
                "lambda={} status={status} tested={} violations={}",
                r.lambda, r.tested, r.violations
            )?;
            if let Some(w) = &r.first {
                let excess = w.y_length.map_or_else(|| "unbounded".to_string(), |n| n.to_string());
                writeln!(
                    f,
                    "witness lambda={} u=\"{}\" g=\"{}\" v=\"{}\" excess={excess}",
                    r.lambda,
                    self.alphabet.format(&w.u),
                    self.alphabet.format(&w.g),
                    self.alphabet.format(&w.v)
                )?;
            }
        }
        match self.min_lambda() {
            Some(l) => writeln!(f, "min_lambda={l}")?,
            None => writeln!(f, "min_lambda=none")?,
        }
        let status = if self.inconclusive() {
            "inconclusive".to_string()
        } else if let Some(l) = self.min_lambda() {
            format!("no witnesses at λ={l} (radius {})", self.radius)
        } else {
            format!("no λ ≤ {} certified at radius {}", self.lambda_max, self.radius)
        };
        writeln!(f, "result=\"{status}\"")
    }
}

/// Runs limited crossover for `λ = 1..=lambda_max` with `Y = Z = {x, d}`.
pub fn trefoil_crossover(
    generators: TrefoilGenerators,
    radius: usize,
    lambda_max: usize,
) -> Result<TrefoilExperiment> {
    let group = Arc::new(TrefoilGroup::new(generators)?);
    let ctx = Arc::new(TrefoilCoset::new(group.clone())?);
    let y = ctx.generators().clone();
    let sys = CosetSystem::new(ctx, Mode::Sync);
    let mut rows = Vec::new();
    for lambda in 1..=lambda_max {
        let report = check_limited_crossover(&sys, &y, y.words(), lambda, radius)?;
        rows.push(LambdaRow {
            lambda,
            tested: report.tested,
            violations: report.witnesses.len(),
            first: report.witnesses.first().cloned(),
            saturated: lambda >= radius,
        });
    }
    Ok(TrefoilExperiment {
        generators,
        radius,
        lambda_max,
        rows,
        alphabet: group.alphabet().clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::decompose;

    fn setup(gens: TrefoilGenerators) -> (Arc<TrefoilGroup>, TrefoilCoset) {
        let g = Arc::new(TrefoilGroup::new(gens).unwrap());
        let h = TrefoilCoset::new(g.clone()).unwrap();
        (g, h)
    }

    #[test]
    fn isomorphism_data() {
        let (g, _) = setup(TrefoilGenerators::Amalgam);
        let al = g.alphabet();
        let w = |s: &str| al.parse(s).unwrap();
        // x = b⁻¹a, y = x⁻¹b = a⁻¹b²
        let (x, y) = (w("b^-1 a"), w("a^-1 b b"));
        let xyx = x.concat(&y).concat(&x);
        assert!(g.equal(&xyx, &y.concat(&x).concat(&y)));
        assert!(g.equal(&xyx, &w("a")));
        assert!(g.equal(&x.concat(&y), &w("b")));
        // d is central
        let d = xyx.concat(&xyx);
        for l in al.letters() {
            let s = Word::single(l);
            assert!(g.equal(&d.concat(&s), &s.concat(&d)));
        }
    }

    #[test]
    fn braid_generators() {
        let (g, h) = setup(TrefoilGenerators::Braid);
        let al = g.alphabet();
        let w = |s: &str| al.parse(s).unwrap();
        assert!(g.equal(&w("x y x"), &w("y x y")));
        assert!(!g.equal(&w("x y"), &w("y x")));
        assert_eq!(al.format(&h.generators().words()[1]), "x y x x y x");
        assert_eq!(g.geodesic_length(&w("x y x y^-1 x^-1 y^-1")), 0);
        for u in al.all_words(4) {
            assert!(g.equal(&g.canonical(&u), &u));
        }
    }

    #[test]
    fn quotient_arithmetic() {
        let (g, _) = setup(TrefoilGenerators::Amalgam);
        let al = g.alphabet();
        let q = |s: &str| quotient_form(al, &al.parse(s).unwrap());
        assert!(q("a a").is_empty());
        assert!(q("b b b").is_empty());
        assert_eq!(q("a^-1 b^-1 b^-1"), vec![Syllable::A, Syllable::B]);
        assert_eq!(x_power(2), q("b^-1 a b^-1 a"));
        assert_eq!(x_power(-1), q("a^-1 b"));
    }

    #[test]
    fn membership_and_expression() {
        for gens in [TrefoilGenerators::Amalgam, TrefoilGenerators::Braid] {
            let (g, h) = setup(gens);
            let al = g.alphabet();
            for w in al.all_words(6) {
                let expr = h.h_express(&w);
                assert_eq!(expr.is_some(), h.contains(&w), "{}", al.format(&w));
                if let Some(y) = expr {
                    assert!(g.equal(&h.generators().evaluate(al, &y), &w), "{}", al.format(&w));
                }
            }
        }
    }

    #[test]
    fn representatives_are_shortlex_least() {
        for gens in [TrefoilGenerators::Amalgam, TrefoilGenerators::Braid] {
            let (g, h) = setup(gens);
            let al = g.alphabet();
            // brute force: the first word in shortlex order in each coset
            let words = al.all_words(5);
            for w in &words {
                let rep = h.coset_rep(w);
                let first = words
                    .iter()
                    .find(|u| h.contains(&u.concat(&al.invert(w))))
                    .expect("w itself is a candidate");
                assert_eq!(&rep, first, "{}", al.format(w));
                let (y, u) = decompose(&h, w);
                assert!(g.equal(&h.generators().evaluate(al, &y).concat(&u), w));
            }
            let mut reps: Vec<Word> = words.iter().map(|w| h.coset_rep(w)).filter(|r| r.len() <= 4).collect();
            reps.sort_by(|a, b| al.shortlex_cmp(a, b).unwrap());
            reps.dedup();
            assert_eq!(h.coset_language().enumerate(4), reps);
        }
    }

    #[test]
    fn report_is_deterministic() {
        let e = trefoil_crossover(TrefoilGenerators::Braid, 3, 2).unwrap();
        assert!(!e.inconclusive());
        let text = e.to_string();
        assert!(text.starts_with("experiment=trefoil-crossover\ngenerators=xy\n"), "{text}");
        assert_eq!(text, trefoil_crossover(TrefoilGenerators::Braid, 3, 2).unwrap().to_string());
    }
}
