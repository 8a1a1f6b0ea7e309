//! Strings (reduced walks) over a gentle presentation.
//!
//! Word syntax matches the relation syntax: `b*c*a` applies `a` first, `~x`
//! is the formal inverse of `x`, and `simple 1` is the empty word at vertex
//! `1`. Internally letters are kept in application order, so `letters[0]`
//! is the rightmost letter of the written word.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::presentation::{Presentation, PresentationError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Letter {
    pub arrow: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn direct(arrow: usize) -> Self {
        Self { arrow, inverse: false }
    }

    pub fn inverse_of(arrow: usize) -> Self {
        Self { arrow, inverse: true }
    }

    pub fn inverted(self) -> Self {
        Self { arrow: self.arrow, inverse: !self.inverse }
    }

    pub fn source(self, p: &Presentation) -> usize {
        let a = p.quiver().arrow(self.arrow);
        if self.inverse {
            a.target
        } else {
            a.source
        }
    }

    pub fn target(self, p: &Presentation) -> usize {
        let a = p.quiver().arrow(self.arrow);
        if self.inverse {
            a.source
        } else {
            a.target
        }
    }

    pub fn render(self, p: &Presentation) -> String {
        let name = &p.quiver().arrow(self.arrow).name;
        if self.inverse {
            format!("~{name}")
        } else {
            name.clone()
        }
    }

    /// Direct letters sort before inverse ones, then by arrow index.
    fn order_key(self) -> (bool, usize) {
        (self.inverse, self.arrow)
    }

    /// Every letter of a presentation in [`Letter::order_key`] order.
    pub fn all(p: &Presentation) -> Vec<Letter> {
        let n = p.quiver().num_arrows();
        (0..n).map(Letter::direct).chain((0..n).map(Letter::inverse_of)).collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("empty word; write `simple <vertex>`")]
    Empty,
    #[error("letters {position} and {} are not composable", position + 1)]
    NonComposable { position: usize },
    #[error("letter {position} is followed by its own inverse")]
    NotReduced { position: usize },
    #[error("letters {position} and {} contain the relation `{relation}`", position + 1)]
    HitsRelation { position: usize, relation: String },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// A string. `letters` are in application order; `base` is the vertex
/// the walk starts at (the only data of an empty word).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct StringWord {
    pub base: usize,
    pub letters: Vec<Letter>,
}

impl StringWord {
    pub fn simple(v: usize) -> Self {
        Self { base: v, letters: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_simple(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn end(&self, p: &Presentation) -> usize {
        self.letters.last().map_or(self.base, |l| l.target(p))
    }

    /// Vertices visited by the walk, `len() + 1` of them.
    pub fn vertices(&self, p: &Presentation) -> Vec<usize> {
        let mut out = vec![self.base];
        out.extend(self.letters.iter().map(|l| l.target(p)));
        out
    }

    /// The reverse-inverse word; it describes the same module.
    pub fn inverse(&self, p: &Presentation) -> Self {
        Self { base: self.end(p), letters: self.letters.iter().rev().map(|l| l.inverted()).collect() }
    }

    /// Concatenation in application order: `self` first, then `other`.
    /// No validity check.
    pub fn then(&self, other: &StringWord) -> StringWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        StringWord { base: self.base, letters }
    }

    pub fn then_letter(&self, l: Letter) -> StringWord {
        let mut letters = self.letters.clone();
        letters.push(l);
        StringWord { base: self.base, letters }
    }

    /// Checks composability, reducedness and relation avoidance.
    pub fn validate(&self, p: &Presentation) -> Result<(), WordError> {
        if let Some(first) = self.letters.first() {
            if first.source(p) != self.base {
                return Err(WordError::NonComposable { position: 0 });
            }
        }
        for (i, w) in self.letters.windows(2).enumerate() {
            check_junction(p, w[0], w[1], i + 1)?;
        }
        Ok(())
    }

    pub fn is_valid(&self, p: &Presentation) -> bool {
        self.validate(p).is_ok()
    }

    fn cmp_letters(&self, other: &StringWord) -> Ordering {
        let a = self.letters.iter().map(|l| l.order_key());
        let b = other.letters.iter().map(|l| l.order_key());
        a.cmp(b).then(self.base.cmp(&other.base))
    }

    /// The lexicographically smaller of the word and its reverse-inverse.
    pub fn canonical(&self, p: &Presentation) -> StringWord {
        let inv = self.inverse(p);
        if inv.cmp_letters(self) == Ordering::Less {
            inv
        } else {
            self.clone()
        }
    }

    pub fn is_canonical(&self, p: &Presentation) -> bool {
        self.canonical(p) == *self
    }

    /// Written form: `b*c*a`, `~c`, `simple 1`.
    pub fn render(&self, p: &Presentation) -> String {
        if self.letters.is_empty() {
            return format!("simple {}", p.quiver().vertex_name(self.base));
        }
        let parts: Vec<String> = self.letters.iter().rev().map(|l| l.render(p)).collect();
        parts.join("*")
    }

    pub fn display<'a>(&'a self, p: &'a Presentation) -> WordDisplay<'a> {
        WordDisplay { word: self, p }
    }
}

pub struct WordDisplay<'a> {
    word: &'a StringWord,
    p: &'a Presentation,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word.render(self.p))
    }
}

/// Validity of the junction "`first`, then `second`". `position` is the
/// 1-based index of `first` in application order.
fn check_junction(p: &Presentation, first: Letter, second: Letter, position: usize) -> Result<(), WordError> {
    if first.target(p) != second.source(p) {
        return Err(WordError::NonComposable { position });
    }
    if first.arrow == second.arrow && first.inverse != second.inverse {
        return Err(WordError::NotReduced { position });
    }
    let q = p.quiver();
    let hit = match (first.inverse, second.inverse) {
        (false, false) => p.is_zero_pair(second.arrow, first.arrow).then_some((second.arrow, first.arrow)),
        // walking backwards: the underlying path is `first` after `second`
        (true, true) => p.is_zero_pair(first.arrow, second.arrow).then_some((first.arrow, second.arrow)),
        _ => None,
    };
    match hit {
        Some((outer, inner)) => Err(WordError::HitsRelation {
            position,
            relation: format!("{}*{}", q.arrow(outer).name, q.arrow(inner).name),
        }),
        None => Ok(()),
    }
}

/// Parses and validates a word over a gentle presentation.
pub fn make_string(p: &Presentation, text: &str) -> Result<StringWord, WordError> {
    p.require_gentle()?;
    let w = parse_word(p, text)?;
    w.validate(p)?;
    Ok(w)
}

/// Parses without validating junctions (composability is still needed to
/// place the base point).
pub fn parse_word(p: &Presentation, text: &str) -> Result<StringWord, WordError> {
    let text = text.trim();
    let q = p.quiver();
    if let Some(v) = text.strip_prefix("simple") {
        let v = v.trim();
        let idx = q.vertex_index(v).ok_or_else(|| WordError::UnknownVertex(v.to_string()))?;
        return Ok(StringWord::simple(idx));
    }
    if text.is_empty() {
        return Err(WordError::Empty);
    }
    let mut letters = Vec::new();
    for tok in text.split('*').map(str::trim).rev() {
        let (inverse, name) = match tok.strip_prefix('~') {
            Some(n) => (true, n.trim()),
            None => (false, tok),
        };
        let arrow = q.arrow_index(name).ok_or_else(|| WordError::UnknownArrow(name.to_string()))?;
        letters.push(Letter { arrow, inverse });
    }
    let base = letters[0].source(p);
    Ok(StringWord { base, letters })
}

/// `w1` and `w2` describe isomorphic string modules.
pub fn word_isomorphic(p: &Presentation, w1: &StringWord, w2: &StringWord) -> bool {
    w1 == w2 || *w1 == w2.inverse(p)
}

/// Every string of length at most `max_len`, one canonical word per
/// isomorphism class, sorted by length and then letter order. The simples
/// come first.
pub fn enumerate_strings(p: &Presentation, max_len: usize) -> Vec<StringWord> {
    let q = p.quiver();
    let letters = Letter::all(p);
    let mut out = Vec::new();
    let mut frontier: Vec<StringWord> = (0..q.num_vertices()).map(StringWord::simple).collect();
    out.extend(frontier.iter().cloned());
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            let end = w.end(p);
            for &l in &letters {
                if l.source(p) != end {
                    continue;
                }
                let ok = match w.letters.last() {
                    Some(&last) => check_junction(p, last, l, w.len()).is_ok(),
                    None => true,
                };
                if ok {
                    let mut nw = w.clone();
                    nw.letters.push(l);
                    next.push(nw);
                }
            }
        }
        let mut layer: Vec<StringWord> = next.iter().filter(|w| w.is_canonical(p)).cloned().collect();
        layer.sort_by(|a, b| a.cmp_letters(b));
        out.extend(layer);
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{lambda0, table1_catalog};

    #[test]
    fn bca_is_a_string() {
        let p = lambda0();
        let w = make_string(&p, "b*c*a").unwrap();
        assert_eq!(w.len(), 3);
        let names: Vec<&str> = w.vertices(&p).iter().map(|&v| p.quiver().vertex_name(v)).collect();
        assert_eq!(names, ["1", "1", "2", "2"]);
    }

    #[test]
    fn word_errors() {
        let p = lambda0();
        assert_eq!(
            make_string(&p, "a*a").unwrap_err(),
            WordError::HitsRelation { position: 1, relation: "a*a".into() }
        );
        assert_eq!(make_string(&p, "c*~c").unwrap_err(), WordError::NotReduced { position: 1 });
        assert_eq!(make_string(&p, "c*b").unwrap_err(), WordError::NonComposable { position: 1 });
        assert_eq!(make_string(&p, "x").unwrap_err(), WordError::UnknownArrow("x".into()));
        assert_eq!(make_string(&p, "simple 9").unwrap_err(), WordError::UnknownVertex("9".into()));
        assert_eq!(make_string(&p, "").unwrap_err(), WordError::Empty);
        // (dc)^{-1} is also forbidden
        assert!(matches!(make_string(&p, "~c*~d"), Err(WordError::HitsRelation { .. })));
        assert!(matches!(make_string(&p, "~d*~c"), Err(WordError::HitsRelation { .. })));
        assert!(make_string(&p, "~d*a").is_ok());
    }

    #[test]
    fn inverse_words() {
        let p = lambda0();
        let w = make_string(&p, "b*c*a").unwrap();
        let inv = make_string(&p, "~a*~c*~b").unwrap();
        assert_eq!(w.inverse(&p), inv);
        assert!(word_isomorphic(&p, &w, &inv));
        let c = make_string(&p, "c").unwrap();
        assert!(word_isomorphic(&p, &c, &make_string(&p, "~c").unwrap()));
        assert!(!word_isomorphic(&p, &c, &make_string(&p, "d").unwrap()));
        assert_eq!(inv.canonical(&p), w);
    }

    #[test]
    fn enumeration_small_cases() {
        let p = lambda0();
        let got: Vec<String> = enumerate_strings(&p, 1).iter().map(|w| w.render(&p)).collect();
        assert_eq!(got, ["simple 1", "simple 2", "a", "c", "d", "b"]);
        for e in table1_catalog() {
            let simples = enumerate_strings(&e.presentation, 0);
            assert_eq!(simples.len(), 2);
            assert!(simples.iter().all(StringWord::is_simple));
        }
        let three: Vec<String> = enumerate_strings(&p, 3).iter().map(|w| w.render(&p)).collect();
        assert!(three.contains(&"b*c*a".to_string()));
        assert!(three.contains(&"a*d*b".to_string()));
    }

    #[test]
    fn enumeration_is_complete_and_duplicate_free() {
        for e in table1_catalog() {
            let p = &e.presentation;
            let words = enumerate_strings(p, 4);
            for (i, w) in words.iter().enumerate() {
                assert!(w.is_valid(p));
                for v in &words[i + 1..] {
                    assert!(!word_isomorphic(p, w, v), "{}: {} twice", e.name, w.render(p));
                }
            }
            // brute force over all letter sequences of length <= 3
            let letters = Letter::all(p);
            let mut count = 2;
            let mut seqs: Vec<Vec<Letter>> = vec![vec![]];
            for _ in 0..3 {
                let mut next = Vec::new();
                for s in &seqs {
                    for &l in &letters {
                        let mut t = s.clone();
                        t.push(l);
                        let w = StringWord { base: t[0].source(p), letters: t.clone() };
                        if w.is_valid(p) {
                            if w.is_canonical(p) {
                                count += 1;
                            }
                            next.push(t);
                        }
                    }
                }
                seqs = next;
            }
            assert_eq!(count, enumerate_strings(p, 3).len(), "{}", e.name);
        }
    }
}
