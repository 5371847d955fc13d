//! Words and canonical normal forms.
//!
//! Every generator is an involution, so words are plain letter sequences and
//! inversion is reversal. The canonical representative of an element is its
//! lexicographically least reduced spelling under the vertex order; it is
//! maintained incrementally by [`DefiningGraph::mul_letter`].

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{DefiningGraph, JoinWitness, Vertex, VertexSet};

/// An arbitrary (not necessarily reduced) word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Vertex>);

impl Word {
    pub fn letters(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }
}

impl From<Vec<Vertex>> for Word {
    fn from(letters: Vec<Vertex>) -> Self {
        Word(letters)
    }
}

impl From<&NormalForm> for Word {
    fn from(nf: &NormalForm) -> Self {
        Word(nf.0.clone())
    }
}

/// Canonical reduced spelling of a group element.
///
/// Only [`DefiningGraph`] constructs these, so two normal forms from the
/// same graph are equal exactly when the elements are.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm(Vec<Vertex>);

impl NormalForm {
    pub fn identity() -> Self {
        NormalForm(Vec::new())
    }

    pub fn letters(&self) -> &[Vertex] {
        &self.0
    }

    /// Word length, which is also the distance from the identity.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> VertexSet {
        self.0.iter().copied().collect()
    }

    pub fn to_word(&self) -> Word {
        Word(self.0.clone())
    }
}

/// `element = conjugator · core · conjugator⁻¹`, reduced as written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicDecomposition {
    pub conjugator: NormalForm,
    pub core: NormalForm,
}

/// Displays letters by name, space separated.
pub struct Spelled<'a> {
    graph: &'a DefiningGraph,
    letters: &'a [Vertex],
}

impl fmt::Display for Spelled<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &v) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(self.graph.name(v))?;
        }
        Ok(())
    }
}

impl DefiningGraph {
    /// Parses whitespace-separated vertex names; the empty string is the
    /// identity.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        text.split_whitespace().map(|n| self.vertex(n)).collect::<Result<Vec<_>>>().map(Word)
    }

    /// Parses and normalizes.
    pub fn element(&self, text: &str) -> Result<NormalForm> {
        Ok(self.normalize(self.parse_word(text)?.letters()))
    }

    pub fn spell<'a>(&'a self, letters: &'a [Vertex]) -> Spelled<'a> {
        Spelled { graph: self, letters }
    }

    pub fn format(&self, letters: &[Vertex]) -> String {
        self.spell(letters).to_string()
    }

    pub fn normalize(&self, letters: &[Vertex]) -> NormalForm {
        let mut nf = NormalForm::identity();
        for &x in letters {
            self.push_letter(&mut nf.0, x);
        }
        nf
    }

    /// `g · x`.
    pub fn mul_letter(&self, g: &NormalForm, x: Vertex) -> NormalForm {
        let mut out = g.0.clone();
        self.push_letter(&mut out, x);
        NormalForm(out)
    }

    pub fn multiply(&self, a: &NormalForm, b: &NormalForm) -> NormalForm {
        let mut out = a.0.clone();
        for &x in &b.0 {
            self.push_letter(&mut out, x);
        }
        NormalForm(out)
    }

    pub fn invert(&self, a: &NormalForm) -> NormalForm {
        let rev: Vec<Vertex> = a.0.iter().rev().copied().collect();
        self.normalize(&rev)
    }

    /// `a · b · a⁻¹`.
    pub fn conjugate(&self, a: &NormalForm, b: &NormalForm) -> NormalForm {
        let ab = self.multiply(a, b);
        self.multiply(&ab, &self.invert(a))
    }

    /// Right-multiplies the canonical word `u` by `x` in place.
    fn push_letter(&self, u: &mut Vec<Vertex>, x: Vertex) {
        let lk = self.link(x);
        // Walk left through letters commuting with x. Hitting x cancels; any
        // other non-commuting letter pins x to its right.
        let mut barrier = 0;
        for i in (0..u.len()).rev() {
            let y = u[i];
            if y == x {
                let tail: Vec<Vertex> = u.drain(i..).skip(1).collect();
                // A prefix of a canonical word is canonical, and the tail
                // cannot cancel against it, so re-inserting restores the form.
                for y in tail {
                    self.push_letter(u, y);
                }
                return;
            }
            if !lk.contains(y) {
                barrier = i + 1;
                break;
            }
        }
        let pos = (barrier..u.len()).find(|&p| u[p] > x).unwrap_or(u.len());
        u.insert(pos, x);
    }

    /// Whether `letters` is a reduced spelling (no Deletion pair).
    pub fn is_reduced(&self, letters: &[Vertex]) -> bool {
        self.normalize(letters).len() == letters.len()
    }

    /// Letters that can be moved to the front of the reduced word `g`.
    pub fn first_letters(&self, g: &NormalForm) -> VertexSet {
        let mut before = VertexSet::empty();
        let mut out = VertexSet::empty();
        for &v in &g.0 {
            if before.is_subset(self.link(v)) {
                out.insert(v);
            }
            before.insert(v);
        }
        out
    }

    /// Letters that can be moved to the end of the reduced word `g`.
    pub fn last_letters(&self, g: &NormalForm) -> VertexSet {
        let mut after = VertexSet::empty();
        let mut out = VertexSet::empty();
        for &v in g.0.iter().rev() {
            if after.is_subset(self.link(v)) {
                out.insert(v);
            }
            after.insert(v);
        }
        out
    }

    pub fn cyclic_decompose(&self, g: &NormalForm) -> CyclicDecomposition {
        let mut core = g.0.clone();
        let mut peeled = Vec::new();
        loop {
            let u = NormalForm(core.clone());
            let both = self.first_letters(&u).intersection(self.last_letters(&u));
            let s = both.iter().find(|&s| core.iter().filter(|&&y| y == s).count() >= 2);
            let Some(s) = s else { break };
            let first = core.iter().position(|&y| y == s).unwrap();
            let last = core.iter().rposition(|&y| y == s).unwrap();
            core.remove(last);
            core.remove(first);
            peeled.push(s);
            core = self.normalize(&core).0;
        }
        CyclicDecomposition { conjugator: self.normalize(&peeled), core: NormalForm(core) }
    }

    pub fn csupp(&self, g: &NormalForm) -> VertexSet {
        self.cyclic_decompose(g).core.support()
    }

    /// Finite order exactly when the cyclic support spans a clique.
    pub fn is_finite_order(&self, g: &NormalForm) -> bool {
        self.is_clique(self.csupp(g))
    }

    pub fn special_membership(&self, g: &NormalForm, lambda: VertexSet) -> bool {
        g.support().is_subset(lambda)
    }

    /// Minimal-length element of `G_A · g · G_B`.
    pub fn min_double_coset(&self, g: &NormalForm, a: VertexSet, b: VertexSet) -> NormalForm {
        let mut cur = g.clone();
        loop {
            if let Some(s) = self.first_letters(&cur).intersection(a).first() {
                let i = cur.0.iter().position(|&y| y == s).unwrap();
                let mut rest = cur.0.clone();
                rest.remove(i);
                cur = self.normalize(&rest);
            } else if let Some(s) = self.last_letters(&cur).intersection(b).first() {
                let i = cur.0.iter().rposition(|&y| y == s).unwrap();
                let mut rest = cur.0.clone();
                rest.remove(i);
                cur = self.normalize(&rest);
            } else {
                return cur;
            }
        }
    }

    /// Membership of `g` in `G_A G_B` or `G_A G_B G_C`.
    ///
    /// For three factors: an element of `G_A g G_C` lying in `G_B` factors
    /// reduced through the minimal double-coset representative, so that
    /// representative's support must already lie in `B`.
    pub fn product_membership(&self, g: &NormalForm, factors: &[VertexSet]) -> Result<bool> {
        match *factors {
            [a, b] => Ok(self.min_double_coset(g, a, b).is_identity()),
            [a, b, c] => Ok(self.min_double_coset(g, a, c).support().is_subset(b)),
            _ => Err(Error::FactorCount(factors.len())),
        }
    }

    /// Longest contiguous window of `w` whose support lies in an induced
    /// join, with its start.
    pub fn max_join_subword(&self, w: &NormalForm) -> (usize, usize) {
        self.max_window(w, |set| matches!(self.contained_in_join(set), Ok(Some(_))))
    }

    pub fn max_star_subword(&self, w: &NormalForm) -> (usize, usize) {
        self.max_window(w, |set| matches!(self.contained_in_star(set), Ok(Some(_))))
    }

    // The predicates are closed under subsets, so a two-pointer sweep finds
    // the longest qualifying window.
    fn max_window(&self, w: &NormalForm, ok: impl Fn(VertexSet) -> bool) -> (usize, usize) {
        let letters = &w.0;
        let (mut best, mut best_start) = (0, 0);
        let mut start = 0;
        for end in 1..=letters.len() {
            while start < end && !ok(letters[start..end].iter().copied().collect()) {
                start += 1;
            }
            if end - start > best {
                best = end - start;
                best_start = start;
            }
        }
        (best, best_start)
    }

    /// Join witness for the cyclic support of `g`, if it is conjugate into a
    /// join subgroup.
    pub fn csupp_join_witness(&self, g: &NormalForm) -> Option<JoinWitness> {
        let cs = self.csupp(g);
        if cs.is_empty() {
            return None;
        }
        self.contained_in_join(cs).ok().flatten()
    }
}
