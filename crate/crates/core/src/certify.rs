//! Empirical certificates: fellow travelling of coset systems and automatic
//! structures on balls, the `L_H·L^H` construction, geodesic filtering and
//! the hypothesis sweeps of the combination theorems.
//!
//! Unboundedness is only ever reported relative to a distance cap: a pair
//! whose distances leave the cap is listed as exceeding the ball, never as a
//! proof of non-automaticity.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::backend::{GroupBackend, SubgroupContext};
use crate::ball::{CayleyBall, SharedBall};
use crate::coset::{
    check_concatenates_up, check_limited_crossover, check_stability, CosetSystem, Mode, SubgroupSide,
};
use crate::error::{Error, Result};
use crate::fsa::{Language, LazyLanguage};
use crate::gog::GraphOfGroups;
use crate::report::WITNESS_LIMIT;
use crate::word::{Alphabet, Letter, Word};

/// Word metric of a group, truncated at `cap`.
#[derive(Clone, Copy)]
pub struct FellowMetric<'a> {
    group: &'a dyn GroupBackend,
    cap: usize,
}

impl<'a> FellowMetric<'a> {
    pub fn new(group: &'a dyn GroupBackend, cap: usize) -> Self {
        FellowMetric { group, cap }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// `d(p, q) = |p⁻¹q|`, or `None` beyond the cap.
    pub fn distance(&self, p: &Word, q: &Word) -> Option<usize> {
        let al = self.group.alphabet();
        self.group.geodesic_length_within(&al.invert(p).concat(q), self.cap)
    }
}

/// `max_t d(w1(t), h·w2(t))`.
pub fn sync_fellow_distance(m: &FellowMetric<'_>, w1: &Word, h: &Word, w2: &Word) -> Option<usize> {
    let n = w1.len().max(w2.len());
    let mut k = 0;
    for t in 0..=n {
        k = k.max(m.distance(&w1.prefix(t), &h.concat(&w2.prefix(t)))?);
    }
    Some(k)
}

/// The least `K` for which some monotone staircase through the grid of
/// prefix pairs stays within distance `K`; steps advance one or both words.
pub fn async_fellow_distance(m: &FellowMetric<'_>, w1: &Word, h: &Word, w2: &Word) -> Option<usize> {
    let (n1, n2) = (w1.len(), w2.len());
    let right: Vec<Word> = (0..=n2).map(|j| h.concat(&w2.prefix(j))).collect();
    let mut best = vec![vec![usize::MAX; n2 + 1]; n1 + 1];
    for i in 0..=n1 {
        let left = w1.prefix(i);
        for j in 0..=n2 {
            let prev = if i == 0 && j == 0 {
                0
            } else {
                let mut p = usize::MAX;
                if i > 0 {
                    p = p.min(best[i - 1][j]);
                }
                if j > 0 {
                    p = p.min(best[i][j - 1]);
                }
                if i > 0 && j > 0 {
                    p = p.min(best[i - 1][j - 1]);
                }
                p
            };
            if prev == usize::MAX {
                continue;
            }
            if let Some(c) = m.distance(&left, &right[j]) {
                best[i][j] = prev.max(c);
            }
        }
    }
    let k = best[n1][n2];
    (k != usize::MAX).then_some(k)
}

/// A tested triple `(v, h, w)` with `v·x = h·w` for some `x ∈ X± ∪ {ε}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FellowWitness {
    pub v: Word,
    pub h: Word,
    pub w: Word,
}

#[derive(Debug, Clone)]
pub struct FellowCertificate {
    pub mode: Mode,
    pub radius: usize,
    pub cap: usize,
    pub pairs: usize,
    /// Largest per-pair constant among pairs that stayed within the cap.
    pub k: usize,
    /// Pairs whose distances left the cap.
    pub exceeded: Vec<FellowWitness>,
    pub worst: Option<FellowWitness>,
    pub alphabet: Alphabet,
}

impl FellowCertificate {
    pub fn bounded(&self) -> bool {
        self.exceeded.is_empty()
    }
}

impl fmt::Display for FellowCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "certificate mode={} radius={} pairs={} K={} status={}",
            self.mode,
            self.radius,
            self.pairs,
            self.k,
            if self.bounded() { "bounded" } else { "exceeds-ball" }
        )?;
        let al = &self.alphabet;
        for w in self.exceeded.iter().take(WITNESS_LIMIT) {
            writeln!(
                f,
                "witness v=\"{}\" h=\"{}\" w=\"{}\" exceeds={}",
                al.format(&w.v),
                al.format(&w.h),
                al.format(&w.w),
                self.cap
            )?;
        }
        Ok(())
    }
}

/// Distance cap used by the sweeps at a given radius.
pub fn default_cap(radius: usize) -> usize {
    2 * radius + 2
}

fn sweep(
    words: &[Word],
    key: impl Fn(&Word) -> Word + Sync,
    group: &dyn GroupBackend,
    mode: Mode,
    radius: usize,
) -> FellowCertificate {
    let al = group.alphabet().clone();
    let mut by_key: BTreeMap<Word, Vec<Word>> = BTreeMap::new();
    for w in words {
        by_key.entry(key(w)).or_default().push(w.clone());
    }
    let steps: Vec<Option<Letter>> = std::iter::once(None).chain(al.letters().map(Some)).collect();
    let mut triples: Vec<FellowWitness> = words
        .par_iter()
        .flat_map_iter(|v| {
            let mut out = Vec::new();
            for x in &steps {
                let mut vx = v.clone();
                if let Some(l) = x {
                    vx.push(*l);
                }
                if let Some(ws) = by_key.get(&key(&vx)) {
                    for w in ws {
                        let h = group.canonical(&vx.concat(&al.invert(w)));
                        out.push(FellowWitness {
                            v: v.clone(),
                            h,
                            w: w.clone(),
                        });
                    }
                }
            }
            out
        })
        .collect();
    triples.sort();
    triples.dedup();
    let cap = default_cap(radius);
    let metric = FellowMetric::new(group, cap);
    let results: Vec<Option<usize>> = triples
        .par_iter()
        .map(|t| match mode {
            Mode::Sync => sync_fellow_distance(&metric, &t.v, &t.h, &t.w),
            Mode::Async => async_fellow_distance(&metric, &t.v, &t.h, &t.w),
        })
        .collect();
    let mut k = 0;
    let mut worst = None;
    let mut exceeded = Vec::new();
    for (t, r) in triples.iter().zip(&results) {
        match r {
            Some(d) if *d > k || worst.is_none() => {
                k = *d;
                worst = Some(t.clone());
            }
            Some(_) => {}
            None => exceeded.push(t.clone()),
        }
    }
    FellowCertificate {
        mode,
        radius,
        cap,
        pairs: triples.len(),
        k,
        exceeded,
        worst,
        alphabet: al,
    }
}

/// Fellow travelling of `v, h·w` for `v, w ∈ L^H` up to `radius` with
/// `d(v, hw) ≤ 1`, in the system's mode.
pub fn certify_coset_system(sys: &CosetSystem, radius: usize) -> FellowCertificate {
    let ctx = sys.context.clone();
    let words = sys.language.enumerate(radius);
    sweep(&words, |w| ctx.coset_rep(w), ctx.parent(), sys.mode, radius)
}

/// Fellow travelling of `u, v ∈ L` up to `radius` with `d(u, v) ≤ 1`.
pub fn certify_automatic(
    language: &Language,
    group: &dyn GroupBackend,
    radius: usize,
    mode: Mode,
) -> FellowCertificate {
    let words = language.enumerate(radius);
    sweep(&words, |w| group.canonical(w), group, mode, radius)
}

/// `G` over `X ∪ Y`, where the letters of `Y` stand for the generator words
/// of a subgroup. Equality keys are the canonical forms over `X`, which need
/// not be geodesic over `X ∪ Y`; geodesic lengths come from a growing ball.
#[derive(Debug)]
pub struct ExtendedGroup {
    context: Arc<dyn SubgroupContext>,
    alphabet: Alphabet,
    base_letters: usize,
    ball: SharedBall,
}

impl ExtendedGroup {
    pub fn new(context: Arc<dyn SubgroupContext>) -> Result<Self> {
        let x = context.parent().alphabet();
        let y = context.generators().alphabet();
        let mut spec: Vec<(String, bool)> = x
            .generator_names()
            .iter()
            .map(|n| (n.clone(), x.is_self_inverse(x.letter(n).expect("own name"))))
            .collect();
        for n in y.generator_names() {
            let name = if x.letter(n).is_some() { format!("h.{n}") } else { n.clone() };
            spec.push((name, y.is_self_inverse(y.letter(n).expect("own name"))));
        }
        let spec: Vec<(&str, bool)> = spec.iter().map(|(n, s)| (n.as_str(), *s)).collect();
        Ok(ExtendedGroup {
            alphabet: Alphabet::with_involutions(&spec)?,
            base_letters: x.size(),
            context,
            ball: SharedBall::new(),
        })
    }

    /// Letter of the extended alphabet for a letter of `Y±`.
    pub fn y_letter(&self, l: Letter) -> Letter {
        Letter(self.base_letters as u32 + l.0)
    }

    /// The word over `X±` represented by a word over `(X ∪ Y)±`.
    pub fn evaluate(&self, w: &Word) -> Word {
        let x = self.context.parent().alphabet();
        let gens = self.context.generators();
        let mut out = Word::empty();
        for l in w.iter() {
            if l.index() < self.base_letters {
                out.push(l);
            } else {
                out.extend_from(&gens.letter_word(x, Letter(l.0 - self.base_letters as u32)));
            }
        }
        out
    }
}

impl GroupBackend for ExtendedGroup {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn canonical(&self, w: &Word) -> Word {
        self.context.parent().canonical(&self.evaluate(w))
    }

    fn geodesic_length(&self, w: &Word) -> usize {
        self.ball
            .distance_within(self, &self.canonical(w), usize::MAX)
            .expect("every element has a finite length")
    }

    fn geodesic_length_within(&self, w: &Word, cap: usize) -> Option<usize> {
        self.ball.distance_within(self, &self.canonical(w), cap)
    }

    fn canonical_language(&self) -> Language {
        let base = self.context.parent().canonical_language();
        let n = self.base_letters;
        Language::Lazy(
            LazyLanguage::new(self.alphabet.clone(), move |w| {
                w.iter().all(|l| l.index() < n) && base.contains(w)
            }),
        )
    }
}

/// The language `L_H·L^H` over `X ∪ Y`.
#[derive(Debug, Clone)]
pub struct ConcatStructure {
    pub group: Arc<ExtendedGroup>,
    pub language: Language,
}

/// Concatenate a language `L_H` over `Y±` with the coset language of `sys`.
pub fn concat_structure(l_h: &Language, sys: &CosetSystem) -> Result<ConcatStructure> {
    let ctx = sys.context.clone();
    if l_h.alphabet() != ctx.generators().alphabet() {
        return Err(Error::AlphabetMismatch(
            "L_H must be over the subgroup generators".into(),
        ));
    }
    let group = Arc::new(ExtendedGroup::new(ctx.clone())?);
    let al = group.alphabet().clone();
    let nx = ctx.parent().alphabet().size();
    let symbols: Vec<String> = al.letters().map(|l| al.name(l).to_string()).collect();
    let language = match (l_h.dfa(), sys.language.dfa()) {
        (Some(dh), Some(dc)) => {
            let ymap: Vec<Option<Letter>> = (0..dh.num_letters())
                .map(|i| Some(group.y_letter(Letter(i as u32))))
                .collect();
            let xmap: Vec<Option<Letter>> = (0..dc.num_letters()).map(|i| Some(Letter(i as u32))).collect();
            let d = dh
                .relabel(symbols.clone(), &ymap)?
                .concat(&dc.relabel(symbols, &xmap)?)?;
            Language::from_dfa(&al, d.minimize())?
        }
        _ => {
            let (lh, lc) = (l_h.clone(), sys.language.clone());
            let (lh2, lc2) = (l_h.clone(), sys.language.clone());
            let g2 = group.clone();
            Language::Lazy(
                LazyLanguage::new(al, move |w| {
                    let split = w.iter().position(|l| l.index() < nx).unwrap_or(w.len());
                    let (p, q) = (&w.letters()[..split], &w.letters()[split..]);
                    q.iter().all(|l| l.index() < nx)
                        && lh.contains(&p.iter().map(|l| Letter(l.0 - nx as u32)).collect())
                        && lc.contains(&Word::from_letters(q.to_vec()))
                })
                .with_enumerator(move |n| {
                    let mut out = Vec::new();
                    for p in lh2.enumerate(n) {
                        let pw: Word = p.iter().map(|l| g2.y_letter(l)).collect();
                        for q in lc2.enumerate(n - p.len()) {
                            out.push(pw.concat(&q));
                        }
                    }
                    out
                }),
            )
        }
    };
    Ok(ConcatStructure { group, language })
}

/// Keep only coset-geodesic words. Fails if some coset met by the ball of
/// the given radius loses all of its representatives.
pub fn geodesic_coset_filter(sys: &CosetSystem, radius: usize) -> Result<CosetSystem> {
    let ctx = sys.context.clone();
    let keep_ctx = ctx.clone();
    let language = sys
        .language
        .filter(move |w| keep_ctx.min_coset_length(w) == w.len());
    let parent = ctx.parent();
    let kept: HashSet<Word> = language.enumerate(radius).iter().map(|w| ctx.coset_rep(w)).collect();
    let ball = CayleyBall::with_radius(parent, radius);
    if let Some(g) = ball.elements().find(|g| !kept.contains(&ctx.coset_rep(g))) {
        return Err(Error::Precondition(format!(
            "geodesic coset words miss the coset of {} within radius {radius}",
            parent.alphabet().format(g)
        )));
    }
    Ok(CosetSystem::with_language(ctx, language, Mode::Sync))
}

/// Which combination theorem's hypotheses to sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    Async,
    Sync,
    Both,
}

#[derive(Debug, Clone, Copy)]
pub struct HypothesisParams {
    pub radius: usize,
    pub lambda: usize,
    pub mu: usize,
    pub theorem: Theorem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisRow {
    pub theorem: Mode,
    pub check: &'static str,
    pub edge: String,
    pub other: Option<String>,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct HypothesesReport {
    pub rows: Vec<HypothesisRow>,
}

impl HypothesesReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn passed_for(&self, theorem: Mode) -> bool {
        self.rows.iter().filter(|r| r.theorem == theorem).all(|r| r.passed)
    }
}

impl fmt::Display for HypothesesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            write!(f, "row theorem={} check={} edge={}", r.theorem, r.check, r.edge)?;
            if let Some(o) = &r.other {
                write!(f, " with={o}")?;
            }
            writeln!(
                f,
                " status={} detail=\"{}\"",
                if r.passed { "pass" } else { "fail" },
                r.detail
            )?;
        }
        for m in [Mode::Async, Mode::Sync] {
            if self.rows.iter().any(|r| r.theorem == m) {
                writeln!(f, "theorem={m} status={}", if self.passed_for(m) { "pass" } else { "fail" })?;
            }
        }
        Ok(())
    }
}

/// Sweep the per-edge hypotheses of the asynchronous and/or synchronous
/// combination theorems.
pub fn combination_hypotheses_report(gog: &GraphOfGroups, params: HypothesisParams) -> HypothesesReport {
    let modes: &[Mode] = match params.theorem {
        Theorem::Async => &[Mode::Async],
        Theorem::Sync => &[Mode::Sync],
        Theorem::Both => &[Mode::Async, Mode::Sync],
    };
    let r = params.radius;
    let mut rows = Vec::new();
    for &theorem in modes {
        for e in gog.edges() {
            let ctx = e.subgroup.clone();
            let row = |check, other: Option<String>, passed, detail: String| HypothesisRow {
                theorem,
                check,
                edge: e.name.clone(),
                other,
                passed,
                detail,
            };
            let sys = CosetSystem::new(ctx.clone(), theorem);
            let cert = certify_coset_system(&sys, r);
            rows.push(row(
                "coset-automatic",
                None,
                cert.bounded(),
                format!("K={} pairs={}", cert.k, cert.pairs),
            ));

            let rev = gog.edge(e.reverse);
            let stab = check_stability(
                &e.iso,
                SubgroupSide {
                    parent: gog.vertex(e.to).group.as_ref(),
                    gens: ctx.generators(),
                },
                SubgroupSide {
                    parent: gog.vertex(e.from).group.as_ref(),
                    gens: rev.subgroup.generators(),
                },
                params.mu,
                r.min(4),
            );
            rows.push(match stab {
                Ok(s) => row(
                    "stability",
                    None,
                    s.passed(),
                    format!("mu={} tested={} violations={}", params.mu, s.tested, s.witnesses.len()),
                ),
                Err(err) => row("stability", None, false, err.to_string()),
            });

            for f in gog.edges() {
                if f.to != e.to {
                    continue;
                }
                let z = f.subgroup.generators().words().to_vec();
                let res = check_limited_crossover(&sys, ctx.generators(), &z, params.lambda, r);
                let detail = match &res {
                    Ok(c) => format!(
                        "lambda={} tested={} violations={}",
                        params.lambda,
                        c.tested,
                        c.witnesses.len()
                    ),
                    Err(err) => err.to_string(),
                };
                let passed = res.map(|c| c.passed()).unwrap_or(false);
                rows.push(row("crossover", Some(f.name.clone()), passed, detail));
            }

            if theorem == Mode::Sync {
                let parent = ctx.parent();
                let al = parent.alphabet();
                let letters = ctx.generators().single_letters();
                rows.push(row(
                    "y-in-x",
                    None,
                    letters.is_some(),
                    match &letters {
                        Some(_) => "generators are letters".to_string(),
                        None => "some generator is not a letter of the vertex alphabet".to_string(),
                    },
                ));
                let words = sys.language.enumerate(r);
                let bad = words.iter().find(|w| ctx.min_coset_length(w) != w.len());
                rows.push(row(
                    "geodesic",
                    None,
                    bad.is_none(),
                    bad.map_or_else(|| format!("tested={}", words.len()), |w| format!("non-geodesic {}", al.format(w))),
                ));
                let avoid = match &letters {
                    Some(ls) => {
                        let ys: HashSet<Letter> = ls.iter().flat_map(|&l| [l, al.inverse(l)]).collect();
                        let bad = words.iter().find(|w| w.first().is_some_and(|l| ys.contains(&l)));
                        (bad.is_none(), bad.map_or_else(|| format!("tested={}", words.len()), |w| format!("starts with a generator: {}", al.format(w))))
                    }
                    None => (false, "generators are not letters".to_string()),
                };
                rows.push(row("y-avoiding", None, avoid.0, avoid.1));
                rows.push(match check_concatenates_up(ctx.as_ref(), r) {
                    Ok(c) => row(
                        "factorization",
                        None,
                        c.passed(),
                        format!("tested={} violations={}", c.tested, c.witnesses.len()),
                    ),
                    Err(err) => row("factorization", None, false, err.to_string()),
                });
            }
        }
    }
    HypothesesReport { rows }
}
