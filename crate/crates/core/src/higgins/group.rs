use std::sync::Arc;

use super::{BaseMode, Pi1};
use crate::backend::{GroupBackend, SubgroupContext};
use crate::ball::SharedBall;
use crate::error::{Error, Result};
use crate::fsa::{Language, LazyLanguage};
use crate::word::{Alphabet, GeneratingSet, Word};

fn higgins_language(pi1: &Arc<Pi1>, mode: BaseMode) -> Language {
    match pi1.higgins_automaton(mode) {
        Ok(dfa) => Language::from_dfa(pi1.alphabet(), dfa).expect("deflated alphabet"),
        Err(_) => {
            let p = pi1.clone();
            Language::Lazy(LazyLanguage::new(pi1.alphabet().clone(), move |w| p.is_higgins(w, mode)))
        }
    }
}

/// `π₁(𝒢, T)` as a group backend; canonical forms are Higgins normal forms
/// at a fixed base vertex, geodesic lengths come from a growing ball.
#[derive(Debug)]
pub struct Pi1Group {
    pi1: Arc<Pi1>,
    base: usize,
    language: Language,
    ball: SharedBall,
}

impl Pi1Group {
    pub fn new(pi1: Arc<Pi1>, base: usize) -> Result<Self> {
        if base >= pi1.gog().vertices().len() {
            return Err(Error::Precondition(format!("no vertex with index {base}")));
        }
        let language = higgins_language(&pi1, BaseMode::Group(base));
        Ok(Pi1Group {
            pi1,
            base,
            language,
            ball: SharedBall::new(),
        })
    }

    pub fn pi1(&self) -> &Arc<Pi1> {
        &self.pi1
    }

    pub fn base(&self) -> usize {
        self.base
    }
}

impl GroupBackend for Pi1Group {
    fn alphabet(&self) -> &Alphabet {
        self.pi1.alphabet()
    }

    fn canonical(&self, w: &Word) -> Word {
        self.pi1
            .normal_form(w, self.base)
            .expect("words over the deflated alphabet reduce")
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
        self.language.clone()
    }
}

/// The subgroup `G_{e0}` of `π₁(𝒢, T)`, with Higgins coset forms as
/// representatives.
#[derive(Debug)]
pub struct Pi1Coset {
    group: Arc<Pi1Group>,
    e0: usize,
    gens: GeneratingSet,
    language: Language,
}

impl Pi1Coset {
    pub fn new(group: Arc<Pi1Group>, e0: usize) -> Result<Self> {
        let pi1 = group.pi1.clone();
        if e0 >= pi1.gog().edges().len() {
            return Err(Error::Precondition(format!("no edge with index {e0}")));
        }
        let edge = pi1.gog().edge(e0);
        let local = edge.subgroup.generators();
        let words = local.words().iter().map(|w| pi1.lift(edge.to, w)).collect();
        let gens = GeneratingSet::new(local.alphabet().generator_names(), words)?;
        let language = higgins_language(&pi1, BaseMode::Coset(e0));
        Ok(Pi1Coset {
            group,
            e0,
            gens,
            language,
        })
    }

    pub fn edge(&self) -> usize {
        self.e0
    }
}

impl SubgroupContext for Pi1Coset {
    fn parent(&self) -> &dyn GroupBackend {
        self.group.as_ref()
    }

    fn generators(&self) -> &GeneratingSet {
        &self.gens
    }

    fn h_express(&self, w: &Word) -> Option<Word> {
        if !self.contains(w) {
            return None;
        }
        let pi1 = &self.group.pi1;
        let v = pi1.gog().edge(self.e0).to;
        let nf = pi1.normal_form(w, v).ok()?;
        let local = pi1.local_word(v, &nf)?;
        pi1.gog().edge(self.e0).subgroup.h_express(&local)
    }

    fn coset_rep(&self, w: &Word) -> Word {
        self.group
            .pi1
            .coset_normal_form(w, self.e0)
            .expect("words over the deflated alphabet reduce")
    }

    fn coset_language(&self) -> Language {
        self.language.clone()
    }

    fn min_coset_length(&self, w: &Word) -> usize {
        let target = self.coset_rep(w);
        self.group
            .ball
            .first_sphere_with(self.group.as_ref(), usize::MAX, |g| self.coset_rep(g) == target)
            .expect("the coset has a member")
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{free_product, trefoil};
    use super::*;
    use crate::backend::decompose;

    #[test]
    fn trefoil_group_backend() {
        let t = Arc::new(trefoil());
        let g = Arc::new(Pi1Group::new(t.clone(), 0).unwrap());
        let f = |s: &str| t.parse(s).unwrap();
        assert!(g.equal(&f("a a"), &f("b b b")));
        assert_eq!(g.geodesic_length(&f("b b b")), 2);
        assert_eq!(g.geodesic_length(&f("a b a^-1 b^-1")), 4);
        assert!(g.canonical_language().dfa().is_some());

        let h = Pi1Coset::new(g.clone(), 0).unwrap();
        assert!(h.contains(&f("a^-2")));
        assert_eq!(h.h_express(&f("a^-2")).map(|y| h.generators().alphabet().format(&y)), Some("y1^-1".into()));
        assert_eq!(h.min_coset_length(&f("b b b b")), 1);
        for w in t.alphabet().all_words(4) {
            let (y, u) = decompose(&h, &w);
            let back = h.generators().evaluate(t.alphabet(), &y).concat(&u);
            assert!(g.equal(&back, &w));
        }
    }

    #[test]
    fn free_product_geodesics() {
        let p = Arc::new(free_product());
        let g = Pi1Group::new(p.clone(), 1).unwrap();
        for w in p.alphabet().all_words(4) {
            assert_eq!(g.geodesic_length(&w), p.alphabet().free_reduce(&w).len());
        }
    }
}
