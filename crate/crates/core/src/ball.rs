//! Balls in Cayley graphs, grown breadth first from the identity.

use std::collections::HashMap;

use parking_lot::RwLock;

use crate::backend::GroupBackend;
use crate::word::Word;

/// Elements keyed by canonical form, each with its distance from the
/// identity and its shortlex-least geodesic.
#[derive(Debug, Clone)]
pub struct CayleyBall {
    layers: Vec<Vec<Word>>,
    index: HashMap<Word, (usize, Word)>,
}

impl CayleyBall {
    /// The ball of radius 0; the identity's canonical form is always `ε`.
    pub fn new() -> Self {
        CayleyBall {
            layers: vec![vec![Word::empty()]],
            index: HashMap::from([(Word::empty(), (0, Word::empty()))]),
        }
    }

    pub fn with_radius(group: &dyn GroupBackend, radius: usize) -> Self {
        let mut b = Self::new();
        while b.radius() < radius {
            b.grow(group);
        }
        b
    }

    pub fn radius(&self) -> usize {
        self.layers.len() - 1
    }

    /// Add the next sphere, which is empty once a finite group is exhausted.
    /// Returns whether it is nonempty.
    pub fn grow(&mut self, group: &dyn GroupBackend) -> bool {
        let al = group.alphabet();
        let d = self.layers.len();
        let mut next = Vec::new();
        for g in self.layers.last().expect("nonempty") {
            for l in al.letters() {
                let mut w = g.clone();
                w.push(l);
                let c = group.canonical(&w);
                if let std::collections::hash_map::Entry::Vacant(e) = self.index.entry(c) {
                    e.insert((d, w.clone()));
                    next.push(w);
                }
            }
        }
        let grew = !next.is_empty();
        self.layers.push(next);
        grew
    }

    /// Geodesic length of `w`, if within the ball.
    pub fn distance(&self, group: &dyn GroupBackend, w: &Word) -> Option<usize> {
        self.index.get(&group.canonical(w)).map(|(d, _)| *d)
    }

    /// Distance of an element given by its canonical form.
    pub fn distance_of(&self, canonical: &Word) -> Option<usize> {
        self.index.get(canonical).map(|(d, _)| *d)
    }

    /// Shortlex-least geodesic of `w`, if within the ball.
    pub fn geodesic(&self, group: &dyn GroupBackend, w: &Word) -> Option<&Word> {
        self.index.get(&group.canonical(w)).map(|(_, g)| g)
    }

    /// Shortlex-least geodesics at exactly distance `d`, in shortlex order.
    pub fn sphere(&self, d: usize) -> &[Word] {
        self.layers.get(d).map_or(&[], |l| l.as_slice())
    }

    /// All shortlex-least geodesics in the ball, in shortlex order.
    pub fn elements(&self) -> impl Iterator<Item = &Word> {
        self.layers.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }
}

impl Default for CayleyBall {
    fn default() -> Self {
        Self::new()
    }
}

/// A ball shared between threads and grown on demand.
#[derive(Debug, Default)]
pub struct SharedBall(RwLock<CayleyBall>);

impl SharedBall {
    pub fn new() -> Self {
        Self::default()
    }

    /// Distance of the element with the given canonical form, growing the
    /// ball up to radius `cap`.
    pub fn distance_within(&self, group: &dyn GroupBackend, canonical: &Word, cap: usize) -> Option<usize> {
        if let Some(d) = self.0.read().distance_of(canonical) {
            return Some(d);
        }
        let mut ball = self.0.write();
        loop {
            if let Some(d) = ball.distance_of(canonical) {
                return Some(d);
            }
            if ball.radius() >= cap || !ball.grow(group) {
                return None;
            }
        }
    }

    /// The least distance whose sphere has an element satisfying `pred`,
    /// searching up to radius `cap`.
    pub fn first_sphere_with(
        &self,
        group: &dyn GroupBackend,
        cap: usize,
        mut pred: impl FnMut(&Word) -> bool,
    ) -> Option<usize> {
        let mut ball = self.0.write();
        for d in 0..=cap {
            while ball.radius() < d {
                if !ball.grow(group) {
                    return None;
                }
            }
            if ball.sphere(d).iter().any(&mut pred) {
                return Some(d);
            }
        }
        None
    }
}
