//! Coset systems and empirical checks of crossover, stability, and
//! concatenation-up.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::backend::{GroupBackend, SubgroupContext};
use crate::error::{Error, Result};
use crate::fsa::{Language, LazyLanguage};
use crate::report::{PropertyReport, WITNESS_LIMIT};
use crate::word::{Alphabet, GeneratingSet, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Sync,
    Async,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sync => "sync",
            Mode::Async => "async",
        })
    }
}

/// A subgroup together with a coset language `L^H`.
#[derive(Debug, Clone)]
pub struct CosetSystem {
    pub context: Arc<dyn SubgroupContext>,
    pub language: Language,
    pub claimed_k: Option<usize>,
    pub mode: Mode,
    /// The language is exactly the context's representatives, one per coset,
    /// so `coset_rep` names the only language word of a coset.
    pub unique_reps: bool,
}

impl CosetSystem {
    /// The system of the context's own coset language.
    pub fn new(context: Arc<dyn SubgroupContext>, mode: Mode) -> Self {
        let language = context.coset_language();
        CosetSystem {
            context,
            language,
            claimed_k: None,
            mode,
            unique_reps: true,
        }
    }

    pub fn with_language(context: Arc<dyn SubgroupContext>, language: Language, mode: Mode) -> Self {
        CosetSystem {
            context,
            language,
            claimed_k: None,
            mode,
            unique_reps: false,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.context.parent().alphabet()
    }

    /// Language words of length at most `n`, grouped by coset.
    pub(crate) fn words_by_coset(&self, n: usize) -> HashMap<Word, Vec<Word>> {
        let mut map: HashMap<Word, Vec<Word>> = HashMap::new();
        for w in self.language.enumerate(n) {
            map.entry(self.context.coset_rep(&w)).or_default().push(w);
        }
        map
    }
}

/// Word lengths over a generating set, by breadth-first search in the
/// subgroup it generates up to a fixed radius.
#[derive(Debug, Clone)]
pub struct SubgroupMetric {
    dist: HashMap<Word, (usize, Word)>,
    radius: usize,
}

impl SubgroupMetric {
    /// Elements keyed by `parent.canonical`; each stores its length and the
    /// shortlex-least generator word reaching it.
    pub fn new(parent: &dyn GroupBackend, gens: &GeneratingSet, radius: usize) -> Self {
        let al = parent.alphabet();
        let ya = gens.alphabet();
        let letters: Vec<Word> = ya.letters().map(|l| gens.letter_word(al, l)).collect();
        let mut dist = HashMap::from([(Word::empty(), (0, Word::empty()))]);
        let mut frontier = vec![(Word::empty(), Word::empty())];
        for r in 1..=radius {
            let mut next = Vec::new();
            for (g, yw) in &frontier {
                for (l, lw) in ya.letters().zip(&letters) {
                    let h = parent.canonical(&g.concat(lw));
                    if !dist.contains_key(&h) {
                        let mut y = yw.clone();
                        y.push(l);
                        dist.insert(h.clone(), (r, y.clone()));
                        next.push((h, y));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        SubgroupMetric { dist, radius }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Length of the element of `canonical_word`, if within the radius.
    pub fn length(&self, canonical_word: &Word) -> Option<usize> {
        self.dist.get(canonical_word).map(|(d, _)| *d)
    }

    pub fn word(&self, canonical_word: &Word) -> Option<&Word> {
        self.dist.get(canonical_word).map(|(_, w)| w)
    }

    /// All elements with their lengths and words, shortlex by word.
    pub fn elements(&self) -> Vec<(&Word, usize, &Word)> {
        let mut v: Vec<_> = self.dist.iter().map(|(g, (d, w))| (g, *d, w)).collect();
        v.sort_by(|a, b| (a.1, a.2).cmp(&(b.1, b.2)));
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CrossoverWitness {
    pub u: Word,
    pub g: Word,
    pub v: Word,
    /// `|u g v⁻¹|_Y`, or `None` beyond the metric radius.
    pub y_length: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct CrossoverReport {
    pub maximal: bool,
    pub lambda: usize,
    pub radius: usize,
    pub alphabet: Alphabet,
    pub witnesses: Vec<CrossoverWitness>,
    /// Triples `(u, g, v)` examined.
    pub tested: usize,
    /// `(u, g)` pairs whose coset had no language word within the search.
    pub unresolved: usize,
}

impl CrossoverReport {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }

    pub fn to_report(&self) -> PropertyReport {
        let name = if self.maximal { "maximal-crossover" } else { "limited-crossover" };
        let mut r = PropertyReport::new(name, self.radius);
        r.param("lambda", self.lambda);
        r.param("tested", self.tested);
        r.param("unresolved", self.unresolved);
        r.violations = self.witnesses.len();
        for w in self.witnesses.iter().take(WITNESS_LIMIT) {
            r.witness(vec![
                ("u", self.alphabet.format(&w.u)),
                ("g", self.alphabet.format(&w.g)),
                ("v", self.alphabet.format(&w.v)),
                ("excess", w.y_length.map_or_else(|| "unbounded".to_string(), |n| n.to_string())),
            ]);
        }
        r
    }
}

/// Elements of `⟨Z⟩` with `1 ≤ |g|_Z ≤ bound`, as canonical words.
fn z_ball(parent: &dyn GroupBackend, z: &[Word], bound: usize) -> Result<Vec<Word>> {
    let gens = GeneratingSet::numbered("z", z.to_vec())?;
    let metric = SubgroupMetric::new(parent, &gens, bound);
    let mut out: Vec<Word> = metric
        .elements()
        .into_iter()
        .filter(|(_, d, _)| *d >= 1)
        .map(|(g, _, _)| g.clone())
        .collect();
    out.sort();
    Ok(out)
}

fn check_generates(sys: &CosetSystem, y: &GeneratingSet, metric: &SubgroupMetric) -> Result<()> {
    let parent = sys.context.parent();
    for w in sys.context.generators().words() {
        if metric.length(&parent.canonical(w)).is_none() {
            return Err(Error::NotGenerating(format!(
                "{} is not reached by {} probe generators within radius {}",
                parent.alphabet().format(w),
                y.len(),
                metric.radius()
            )));
        }
    }
    Ok(())
}

fn crossover_sweep(
    sys: &CosetSystem,
    y: &GeneratingSet,
    z: &[Word],
    lambda: usize,
    radius: usize,
    maximal: bool,
) -> Result<CrossoverReport> {
    let ctx = sys.context.as_ref();
    let parent = ctx.parent();
    let al = parent.alphabet().clone();
    let g_bound = if maximal { radius } else { lambda };
    let zmax = z.iter().map(|w| w.len()).max().unwrap_or(0);
    let cap = lambda + radius + 1;
    let metric = SubgroupMetric::new(parent, y, cap);
    check_generates(sys, y, &metric)?;
    let gs = z_ball(parent, z, g_bound)?;
    let us: Vec<Word> = sys
        .language
        .enumerate(radius)
        .into_iter()
        .filter(|u| !maximal || !ctx.contains(u))
        .collect();
    let targets = (!sys.unique_reps).then(|| sys.words_by_coset(radius + g_bound * zmax));

    let per_u: Vec<(Vec<CrossoverWitness>, usize, usize)> = us
        .par_iter()
        .map(|u| {
            let mut found = Vec::new();
            let (mut tested, mut unresolved) = (0, 0);
            for g in &gs {
                let ug = u.concat(g);
                let rep = ctx.coset_rep(&ug);
                let vs = match &targets {
                    None => std::slice::from_ref(&rep),
                    Some(t) => match t.get(&rep) {
                        Some(vs) => vs.as_slice(),
                        None => {
                            unresolved += 1;
                            continue;
                        }
                    },
                };
                for v in vs {
                    tested += 1;
                    let h = parent.canonical(&ug.concat(&al.invert(v)));
                    let len = metric.length(&h);
                    if len.is_none_or(|n| n > lambda) {
                        found.push(CrossoverWitness {
                            u: u.clone(),
                            g: g.clone(),
                            v: v.clone(),
                            y_length: len,
                        });
                    }
                }
            }
            (found, tested, unresolved)
        })
        .collect();
    let mut witnesses = Vec::new();
    let (mut tested, mut unresolved) = (0, 0);
    for (w, t, un) in per_u {
        witnesses.extend(w);
        tested += t;
        unresolved += un;
    }
    witnesses.sort();
    Ok(CrossoverReport {
        maximal,
        lambda,
        radius,
        alphabet: al,
        witnesses,
        tested,
        unresolved,
    })
}

/// λ-limited crossover: for `u, v ∈ L^H` with `|u| ≤ radius`, `|g|_Z ≤ λ`
/// and `ug ∈ Hv`, require `|ugv⁻¹|_Y ≤ λ`.
pub fn check_limited_crossover(
    sys: &CosetSystem,
    y: &GeneratingSet,
    z: &[Word],
    lambda: usize,
    radius: usize,
) -> Result<CrossoverReport> {
    crossover_sweep(sys, y, z, lambda, radius, false)
}

/// λ-maximal crossover: as limited crossover but `g` ranges over `⟨Z⟩` up
/// to `radius` and `u ∉ H`.
pub fn check_maximal_crossover(
    sys: &CosetSystem,
    y: &GeneratingSet,
    z: &[Word],
    lambda: usize,
    radius: usize,
) -> Result<CrossoverReport> {
    crossover_sweep(sys, y, z, lambda, radius, true)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct StabilityWitness {
    /// Shortlex-least `Y₁` word of the element.
    pub h: Word,
    pub y1_length: usize,
    pub y2_length: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub mu: usize,
    pub radius: usize,
    pub y1: Alphabet,
    pub witnesses: Vec<StabilityWitness>,
    pub tested: usize,
}

impl StabilityReport {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }

    pub fn to_report(&self) -> PropertyReport {
        let mut r = PropertyReport::new("stability", self.radius);
        r.param("mu", self.mu);
        r.param("tested", self.tested);
        r.violations = self.witnesses.len();
        for w in self.witnesses.iter().take(WITNESS_LIMIT) {
            r.witness(vec![
                ("h", self.y1.format(&w.h)),
                ("length", w.y1_length.to_string()),
                ("image_length", w.y2_length.map_or_else(|| "unbounded".to_string(), |n| n.to_string())),
            ]);
        }
        r
    }
}

/// One side of an edge isomorphism: a group and a generating set of the
/// subgroup inside it.
#[derive(Clone, Copy)]
pub struct SubgroupSide<'a> {
    pub parent: &'a dyn GroupBackend,
    pub gens: &'a GeneratingSet,
}

/// μ-stability of `φ: ⟨Y₁⟩ → ⟨Y₂⟩` given on generators (`images[i]` is a word
/// over `Y₂±`). The homomorphism property is validated on `Y₁` words up to
/// `radius`.
pub fn check_stability(
    images: &[Word],
    h1: SubgroupSide<'_>,
    h2: SubgroupSide<'_>,
    mu: usize,
    radius: usize,
) -> Result<StabilityReport> {
    let y1 = h1.gens.alphabet();
    if images.len() != h1.gens.len() {
        return Err(Error::NotHomomorphism(format!(
            "{} images for {} generators",
            images.len(),
            h1.gens.len()
        )));
    }
    let image_of = |w: &Word| -> Word {
        let mut out = Word::empty();
        for l in w.iter() {
            let im = &images[y1.generator_of(l)];
            if y1.is_positive(l) {
                out.extend_from(im);
            } else {
                out.extend_from(&h2.gens.alphabet().invert(im));
            }
        }
        h2.parent.canonical(&h2.gens.evaluate(h2.parent.alphabet(), &out))
    };
    // homomorphism validation
    let mut seen: HashMap<Word, Word> = HashMap::new();
    for w in y1.all_words(radius) {
        let src = h1.parent.canonical(&h1.gens.evaluate(h1.parent.alphabet(), &w));
        let img = image_of(&w);
        match seen.get(&src) {
            Some(prev) if *prev != img => {
                return Err(Error::NotHomomorphism(format!(
                    "`{}` has two images",
                    y1.format(&w)
                )));
            }
            Some(_) => {}
            None => {
                seen.insert(src, img);
            }
        }
    }
    let m1 = SubgroupMetric::new(h1.parent, h1.gens, mu);
    let image_longest = images.iter().map(|w| w.len()).max().unwrap_or(0);
    let m2 = SubgroupMetric::new(h2.parent, h2.gens, mu * image_longest.max(1) + 1);
    let mut witnesses = Vec::new();
    let mut tested = 0;
    for (_, d, yw) in m1.elements() {
        tested += 1;
        let len = m2.length(&image_of(yw));
        if len.is_none_or(|n| n > mu) {
            witnesses.push(StabilityWitness {
                h: yw.clone(),
                y1_length: d,
                y2_length: len,
            });
        }
    }
    witnesses.sort();
    Ok(StabilityReport {
        mu,
        radius,
        y1: y1.clone(),
        witnesses,
        tested,
    })
}

#[derive(Debug, Clone)]
pub struct ConcatUpReport {
    pub radius: usize,
    pub alphabet: Alphabet,
    /// `(w, v₀, geodesic length of w·v₀)`.
    pub witnesses: Vec<(Word, Word, usize)>,
    pub tested: usize,
}

impl ConcatUpReport {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }

    pub fn to_report(&self) -> PropertyReport {
        let mut r = PropertyReport::new("concatenates-up", self.radius);
        r.param("tested", self.tested);
        r.violations = self.witnesses.len();
        for (w, v, n) in self.witnesses.iter().take(WITNESS_LIMIT) {
            r.witness(vec![
                ("w", self.alphabet.format(w)),
                ("v0", self.alphabet.format(v)),
                ("length", n.to_string()),
            ]);
        }
        r
    }
}

/// Prefix-closed generation of words over `letters` up to length `n`.
fn prefix_closed_words(
    letters: &[crate::word::Letter],
    n: usize,
    keep: impl Fn(&Word) -> bool,
) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for &l in letters {
                let mut v = w.clone();
                v.push(l);
                if keep(&v) {
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// For geodesic `w` over `Y±` and coset-minimal `v₀` with
/// `|w| + |v₀| ≤ radius`, check that `w·v₀` is geodesic.
pub fn check_concatenates_up(ctx: &dyn SubgroupContext, radius: usize) -> Result<ConcatUpReport> {
    let parent = ctx.parent();
    let al = parent.alphabet().clone();
    let ys = ctx.generators().single_letters().ok_or_else(|| {
        Error::Precondition("subgroup generators are not letters of the group alphabet".into())
    })?;
    let mut y_letters: Vec<_> = ys.iter().flat_map(|&l| [l, al.inverse(l)]).collect();
    y_letters.sort();
    y_letters.dedup();
    let all: Vec<_> = al.letters().collect();
    let ws = prefix_closed_words(&y_letters, radius, |w| parent.geodesic_length(w) == w.len());
    let vs = prefix_closed_words(&all, radius, |v| ctx.min_coset_length(v) == v.len());
    let per_w: Vec<(Vec<(Word, Word, usize)>, usize)> = ws
        .par_iter()
        .map(|w| {
            let mut bad = Vec::new();
            let mut tested = 0;
            for v in vs.iter().filter(|v| w.len() + v.len() <= radius) {
                tested += 1;
                let n = parent.geodesic_length(&w.concat(v));
                if n != w.len() + v.len() {
                    bad.push((w.clone(), v.clone(), n));
                }
            }
            (bad, tested)
        })
        .collect();
    let mut witnesses = Vec::new();
    let mut tested = 0;
    for (b, t) in per_w {
        witnesses.extend(b);
        tested += t;
    }
    witnesses.sort();
    Ok(ConcatUpReport {
        radius,
        alphabet: al,
        witnesses,
        tested,
    })
}

/// Remove nonempty words representing the identity coset.
pub fn prune_identity_coset(sys: &CosetSystem) -> Result<CosetSystem> {
    if !sys.language.contains(&Word::empty()) {
        return Err(Error::Precondition("ε is not in the coset language".into()));
    }
    if sys.unique_reps {
        return Ok(sys.clone());
    }
    if let (Some(d), Some(own)) = (sys.language.dfa(), sys.context.coset_language().dfa()) {
        if d == own {
            // coset languages of the backends are built pruned
            return Ok(sys.clone());
        }
    }
    let ctx = sys.context.clone();
    let ctx2 = sys.context.clone();
    let lang = sys.language.clone();
    let lang2 = sys.language.clone();
    let language = Language::Lazy(
        LazyLanguage::new(sys.alphabet().clone(), move |w| {
            lang.contains(w) && (w.is_empty() || !ctx.contains(w))
        })
        .with_enumerator(move |n| {
            lang2
                .enumerate(n)
                .into_iter()
                .filter(|w| w.is_empty() || !ctx2.contains(w))
                .collect()
        }),
    );
    Ok(CosetSystem {
        context: sys.context.clone(),
        language,
        claimed_k: sys.claimed_k,
        mode: sys.mode,
        unique_reps: false,
    })
}

/// Cosets met by words of length `≤ radius` that have no language word of
/// length `≤ search`.
pub fn missing_cosets(sys: &CosetSystem, radius: usize, search: usize) -> Vec<Word> {
    let ctx = sys.context.as_ref();
    let have = sys.words_by_coset(search);
    let mut seen = std::collections::BTreeSet::new();
    let mut queue = VecDeque::from([(Word::empty(), 0)]);
    let mut visited = std::collections::HashSet::from([Word::empty()]);
    let al = sys.alphabet().clone();
    while let Some((w, depth)) = queue.pop_front() {
        let key = ctx.coset_rep(&w);
        if !have.contains_key(&key) {
            seen.insert(key);
        }
        if depth < radius {
            for l in al.letters() {
                let mut v = w.clone();
                v.push(l);
                let c = ctx.parent().canonical(&v);
                if visited.insert(c.clone()) {
                    queue.push_back((c, depth + 1));
                }
            }
        }
    }
    seen.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::{AbelianBackend, AbelianSubgroup, FreeBackend, FreeCyclicSubgroup};
    use crate::fsa::Dfa;

    fn z2_axis() -> (Arc<AbelianBackend>, Arc<dyn SubgroupContext>) {
        let g = Arc::new(AbelianBackend::new(2, &[]).unwrap());
        let x1 = g.alphabet().parse("x1").unwrap();
        let h: Arc<dyn SubgroupContext> = Arc::new(AbelianSubgroup::new(g.clone(), vec![x1]).unwrap());
        (g, h)
    }

    #[test]
    fn axis_limited_crossover_holds() {
        let (g, h) = z2_axis();
        let sys = CosetSystem::new(h.clone(), Mode::Sync);
        let x1 = g.alphabet().parse("x1").unwrap();
        let r = check_limited_crossover(&sys, h.generators(), &[x1.clone()], 1, 6).unwrap();
        assert!(r.passed(), "{}", r.to_report());
        assert!(r.tested > 0);
        // identity-only probe
        let r = check_limited_crossover(&sys, h.generators(), &[Word::empty()], 2, 6).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn axis_maximal_crossover_fails() {
        let (g, h) = z2_axis();
        let al = g.alphabet().clone();
        let sys = CosetSystem::new(h.clone(), Mode::Sync);
        let x1 = al.parse("x1").unwrap();
        let r = check_maximal_crossover(&sys, h.generators(), &[x1], 1, 6).unwrap();
        assert!(!r.passed());
        let want = CrossoverWitness {
            u: al.parse("x2").unwrap(),
            g: al.parse("x1^3").unwrap(),
            v: al.parse("x2").unwrap(),
            y_length: Some(3),
        };
        assert!(r.witnesses.contains(&want));
    }

    #[test]
    fn free_maximal_crossover_holds() {
        let f = Arc::new(FreeBackend::new(2).unwrap());
        let a = f.alphabet().parse("a").unwrap();
        let h: Arc<dyn SubgroupContext> = Arc::new(FreeCyclicSubgroup::new(f.clone(), a.clone()).unwrap());
        let sys = CosetSystem::new(h.clone(), Mode::Sync);
        let r = check_maximal_crossover(&sys, h.generators(), &[a], 1, 5).unwrap();
        assert!(r.passed(), "{}", r.to_report());
    }

    #[test]
    fn probe_must_generate() {
        let (g, h) = z2_axis();
        let sys = CosetSystem::new(h.clone(), Mode::Sync);
        let y = GeneratingSet::numbered("y", vec![g.alphabet().parse("x1 x1").unwrap()]).unwrap();
        assert!(matches!(
            check_limited_crossover(&sys, &y, &[Word::empty()], 1, 3),
            Err(Error::NotGenerating(_))
        ));
    }

    fn z(name: &str) -> Arc<AbelianBackend> {
        Arc::new(AbelianBackend::with_names(1, &[], &[name]).unwrap())
    }

    #[test]
    fn stability_examples() {
        let ga = z("a");
        let gb = z("b");
        let a2 = GeneratingSet::numbered("y", vec![ga.alphabet().parse("a a").unwrap()]).unwrap();
        let b3 = GeneratingSet::numbered("y", vec![gb.alphabet().parse("b^3").unwrap()]).unwrap();
        fn side<'a>(p: &'a Arc<AbelianBackend>, s: &'a GeneratingSet) -> SubgroupSide<'a> {
            SubgroupSide { parent: p.as_ref(), gens: s }
        }
        let y1 = a2.alphabet().parse("y1").unwrap();
        let r = check_stability(&[y1], side(&ga, &a2), side(&gb, &b3), 1, 4).unwrap();
        assert!(r.passed());

        let a = GeneratingSet::numbered("y", vec![ga.alphabet().parse("a").unwrap()]).unwrap();
        let b23 = GeneratingSet::numbered(
            "y",
            vec![gb.alphabet().parse("b b").unwrap(), gb.alphabet().parse("b^3").unwrap()],
        )
        .unwrap();
        // a ↦ b = b³·b⁻²
        let img = b23.alphabet().parse("y2 y1^-1").unwrap();
        let r = check_stability(&[img.clone()], side(&ga, &a), side(&gb, &b23), 1, 4).unwrap();
        assert_eq!(r.witnesses.len(), 2);
        assert_eq!(r.witnesses[0].y2_length, Some(2));
        let r = check_stability(&[img], side(&ga, &a), side(&gb, &b23), 2, 4).unwrap();
        assert!(r.passed());

        // not a homomorphism: y1 ↦ b but the generator a² would need b²
        let bad = check_stability(
            &[b3.alphabet().parse("y1").unwrap(), b3.alphabet().parse("y1").unwrap()],
            side(&ga, &GeneratingSet::numbered("y", vec![ga.alphabet().parse("a").unwrap(), ga.alphabet().parse("a a").unwrap()]).unwrap()),
            side(&gb, &b3),
            1,
            2,
        );
        assert!(matches!(bad, Err(Error::NotHomomorphism(_))));
    }

    #[test]
    fn concatenates_up_examples() {
        let (_, h) = z2_axis();
        let r = check_concatenates_up(h.as_ref(), 8).unwrap();
        assert!(r.passed());
        let f = Arc::new(FreeBackend::new(2).unwrap());
        let a = f.alphabet().parse("a").unwrap();
        let h = FreeCyclicSubgroup::new(f, a).unwrap();
        assert!(check_concatenates_up(&h, 8).unwrap().passed());
    }

    #[test]
    fn concatenates_up_needs_letter_generators() {
        let g = Arc::new(AbelianBackend::new(2, &[]).unwrap());
        let h = AbelianSubgroup::new(g.clone(), vec![g.alphabet().parse("x1 x2").unwrap()]).unwrap();
        assert!(matches!(check_concatenates_up(&h, 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn pruning() {
        let (g, h) = z2_axis();
        let al = g.alphabet().clone();
        let sys = CosetSystem::new(h.clone(), Mode::Sync);
        let pruned = prune_identity_coset(&sys).unwrap();
        assert_eq!(pruned.language.enumerate(8), sys.language.enumerate(8));

        let x1 = Dfa::from_words(sys.language.dfa().unwrap().symbols().to_vec(), &[al.parse("x1").unwrap()]);
        let widened = sys.language.dfa().unwrap().union(&x1).unwrap();
        let wide = CosetSystem::with_language(h.clone(), Language::from_dfa(&al, widened).unwrap(), Mode::Sync);
        assert!(wide.language.contains(&al.parse("x1").unwrap()));
        let pruned = prune_identity_coset(&wide).unwrap();
        assert_eq!(pruned.language.enumerate(6), sys.language.enumerate(6));

        let no_eps = Dfa::from_words(x1.symbols().to_vec(), &[al.parse("x2").unwrap()]);
        let bad = CosetSystem::with_language(h, Language::from_dfa(&al, no_eps).unwrap(), Mode::Sync);
        assert!(prune_identity_coset(&bad).is_err());
    }

    #[test]
    fn coverage_of_cosets() {
        let (_, h) = z2_axis();
        let sys = CosetSystem::new(h, Mode::Sync);
        assert!(missing_cosets(&sys, 4, 4).is_empty());
    }
}
