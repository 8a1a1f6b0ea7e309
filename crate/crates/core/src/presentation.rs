//! Quivers with monomial relations and the gentle conditions.
//!
//! Paths compose right to left: the path written `b*a` applies `a` first,
//! then `b`. Internally a [`Path`] stores arrows in application order.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{arrow}` uses undeclared vertex `{vertex}`")]
    UnknownVertex { arrow: String, vertex: String },
    #[error("unknown vertex `{0}`")]
    NoSuchVertex(String),
    #[error("relation mentions unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("relation `{relation}` is not composable: `{outer}` does not start where `{inner}` ends")]
    NonComposable { relation: String, outer: String, inner: String },
    #[error("empty relation")]
    EmptyRelation,
    #[error("duplicate relation `{0}`")]
    DuplicateRelation(String),
    #[error("presentation `{0}` has not been validated as gentle")]
    NotGentle(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// `arrows` are `(name, source, target)` triples naming declared vertices.
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self, PresentationError> {
        let mut vs: Vec<String> = Vec::with_capacity(vertices.len());
        for v in vertices {
            let v = v.as_ref().to_string();
            if vs.contains(&v) {
                return Err(PresentationError::DuplicateVertex(v));
            }
            vs.push(v);
        }
        let mut out: Vec<Arrow> = Vec::with_capacity(arrows.len());
        for (name, s, t) in arrows {
            let name = name.as_ref().to_string();
            if out.iter().any(|a| a.name == name) {
                return Err(PresentationError::DuplicateArrow(name));
            }
            let lookup = |v: &str| {
                vs.iter()
                    .position(|x| x == v)
                    .ok_or_else(|| PresentationError::UnknownVertex { arrow: name.clone(), vertex: v.to_string() })
            };
            let source = lookup(s.as_ref())?;
            let target = lookup(t.as_ref())?;
            out.push(Arrow { name, source, target });
        }
        Ok(Self { vertices: vs, arrows: out })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow(&self, i: usize) -> &Arrow {
        &self.arrows[i]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn outgoing(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&i| self.arrows[i].source == v)
    }

    pub fn incoming(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&i| self.arrows[i].target == v)
    }
}

/// A path in the quiver; `arrows` are in application order and the path is
/// the trivial path at `start` when empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Self { start: v, arrows: Vec::new() }
    }

    pub fn arrow(q: &Quiver, a: usize) -> Self {
        Self { start: q.arrow(a).source, arrows: vec![a] }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn end(&self, q: &Quiver) -> usize {
        self.arrows.last().map_or(self.start, |&a| q.arrow(a).target)
    }

    /// Right-to-left rendering, `c*b*a` for "a, then b, then c".
    pub fn render(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            return format!("e{}", q.vertex_name(self.start));
        }
        let names: Vec<&str> = self.arrows.iter().rev().map(|&a| q.arrow(a).name.as_str()).collect();
        names.join("*")
    }
}

/// `compose` either yields a nonzero path or zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathValue {
    Path(Path),
    Zero,
}

impl PathValue {
    pub fn is_zero(&self) -> bool {
        matches!(self, PathValue::Zero)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GentleCondition {
    /// Relations are monomials of length exactly two.
    G1,
    /// At most two arrows start and at most two end at every vertex.
    G2,
    /// Unique nonzero continuation on each side of every arrow.
    G3,
    /// Unique zero-relation continuation on each side of every arrow.
    G4,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GentleViolation {
    pub condition: GentleCondition,
    pub arrows: Vec<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GentleReport {
    pub pass: bool,
    pub violations: Vec<GentleViolation>,
}

#[derive(Debug, Clone)]
pub struct Presentation {
    name: String,
    quiver: Quiver,
    relations: Vec<Path>,
    zero_pairs: HashSet<(usize, usize)>,
    gentle: bool,
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other)
    }
}

impl Eq for Presentation {}

impl Presentation {
    /// Relations are given as words in right-to-left notation, e.g.
    /// `["a", "a"]` for `a*a` or `["d", "c"]` for `d*c`.
    pub fn new<S: AsRef<str>>(
        name: impl Into<String>,
        quiver: Quiver,
        relations: &[Vec<S>],
    ) -> Result<Self, PresentationError> {
        let mut rels: Vec<Path> = Vec::new();
        for word in relations {
            if word.is_empty() {
                return Err(PresentationError::EmptyRelation);
            }
            let mut arrows = Vec::with_capacity(word.len());
            for a in word.iter().rev() {
                let a = a.as_ref();
                arrows.push(quiver.arrow_index(a).ok_or_else(|| PresentationError::UnknownArrow(a.to_string()))?);
            }
            let path = Path { start: quiver.arrow(arrows[0]).source, arrows };
            for w in path.arrows.windows(2) {
                let (inner, outer) = (quiver.arrow(w[0]), quiver.arrow(w[1]));
                if inner.target != outer.source {
                    return Err(PresentationError::NonComposable {
                        relation: path.render(&quiver),
                        outer: outer.name.clone(),
                        inner: inner.name.clone(),
                    });
                }
            }
            if rels.contains(&path) {
                return Err(PresentationError::DuplicateRelation(path.render(&quiver)));
            }
            rels.push(path);
        }
        let zero_pairs = rels.iter().filter(|p| p.len() == 2).map(|p| (p.arrows[1], p.arrows[0])).collect();
        Ok(Self { name: name.into(), quiver, relations: rels, zero_pairs, gentle: false })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Path] {
        &self.relations
    }

    /// Length-two relations as `(outer, inner)` arrow pairs.
    pub fn relation_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.relations.iter().filter(|p| p.len() == 2).map(|p| (p.arrows[1], p.arrows[0]))
    }

    /// Whether `outer*inner` is one of the relations.
    pub fn is_zero_pair(&self, outer: usize, inner: usize) -> bool {
        self.zero_pairs.contains(&(outer, inner))
    }

    pub fn is_gentle(&self) -> bool {
        self.gentle
    }

    /// Same quiver and the same set of relations; the name is ignored.
    pub fn same_algebra(&self, other: &Presentation) -> bool {
        let mut a = self.relations.clone();
        let mut b = other.relations.clone();
        a.sort();
        b.sort();
        self.quiver == other.quiver && a == b
    }

    pub fn require_gentle(&self) -> Result<(), PresentationError> {
        if self.gentle {
            Ok(())
        } else {
            Err(PresentationError::NotGentle(self.name.clone()))
        }
    }

    /// Checks the gentle conditions. The presentation itself is already
    /// structurally sound (composable, duplicate-free relations) by
    /// construction.
    pub fn validate_gentle(&self) -> GentleReport {
        let q = &self.quiver;
        let name = |a: usize| q.arrow(a).name.clone();
        let mut violations = Vec::new();

        for r in &self.relations {
            if r.len() != 2 {
                violations.push(GentleViolation {
                    condition: GentleCondition::G1,
                    arrows: r.arrows.iter().map(|&a| name(a)).collect(),
                    message: format!("relation `{}` has length {}", r.render(q), r.len()),
                });
            }
        }

        for v in 0..q.num_vertices() {
            for (dir, list) in [("start", q.outgoing(v).collect::<Vec<_>>()), ("end", q.incoming(v).collect())] {
                if list.len() > 2 {
                    violations.push(GentleViolation {
                        condition: GentleCondition::G2,
                        arrows: list.iter().map(|&a| name(a)).collect(),
                        message: format!("{} arrows {dir} at vertex {}", list.len(), q.vertex_name(v)),
                    });
                }
            }
        }

        for alpha in 0..q.num_arrows() {
            let a = q.arrow(alpha);
            let after: Vec<usize> = q.outgoing(a.target).collect();
            let before: Vec<usize> = q.incoming(a.source).collect();
            let (after_zero, after_nonzero): (Vec<usize>, Vec<usize>) =
                after.iter().partition(|&&b| self.is_zero_pair(b, alpha));
            let (before_zero, before_nonzero): (Vec<usize>, Vec<usize>) =
                before.iter().partition(|&&g| self.is_zero_pair(alpha, g));
            let checks = [
                (GentleCondition::G3, &after_nonzero, "nonzero continuations after it", true),
                (GentleCondition::G3, &before_nonzero, "nonzero continuations before it", false),
                (GentleCondition::G4, &after_zero, "relations starting with it", true),
                (GentleCondition::G4, &before_zero, "relations ending with it", false),
            ];
            for (cond, list, what, outer_side) in checks {
                if list.len() > 1 {
                    let rendered: Vec<String> = list
                        .iter()
                        .map(|&o| {
                            if outer_side {
                                format!("{}*{}", name(o), a.name)
                            } else {
                                format!("{}*{}", a.name, name(o))
                            }
                        })
                        .collect();
                    let mut arrows = vec![a.name.clone()];
                    arrows.extend(list.iter().map(|&o| name(o)));
                    violations.push(GentleViolation {
                        condition: cond,
                        arrows,
                        message: format!("arrow {} has {} {what}: {}", a.name, list.len(), rendered.join(", ")),
                    });
                }
            }
        }
        GentleReport { pass: violations.is_empty(), violations }
    }

    /// Validates and marks the presentation as gentle.
    pub fn into_gentle(mut self) -> Result<Self, GentleReport> {
        let report = self.validate_gentle();
        if report.pass {
            self.gentle = true;
            Ok(self)
        } else {
            Err(report)
        }
    }

    /// Whether the path has no relation as an adjacent pair (and is a path).
    pub fn is_nonzero_path(&self, p: &Path) -> bool {
        let q = &self.quiver;
        let mut at = p.start;
        for &a in &p.arrows {
            if q.arrow(a).source != at {
                return false;
            }
            at = q.arrow(a).target;
        }
        p.arrows.windows(2).all(|w| !self.is_zero_pair(w[1], w[0]))
    }

    /// `outer` after `inner`: defined when `inner` ends where `outer` starts
    /// and the concatenation avoids every relation.
    pub fn compose(&self, outer: &Path, inner: &Path) -> PathValue {
        if inner.end(&self.quiver) != outer.start {
            return PathValue::Zero;
        }
        let mut arrows = inner.arrows.clone();
        arrows.extend_from_slice(&outer.arrows);
        let p = Path { start: inner.start, arrows };
        if self.is_nonzero_path(&p) {
            PathValue::Path(p)
        } else {
            PathValue::Zero
        }
    }

    /// Parses a right-to-left word such as `c*a`.
    pub fn path(&self, word: &str) -> Result<Path, PresentationError> {
        let mut arrows = Vec::new();
        for tok in word.split('*').map(str::trim).rev() {
            arrows.push(self.quiver.arrow_index(tok).ok_or_else(|| PresentationError::UnknownArrow(tok.to_string()))?);
        }
        if arrows.is_empty() {
            return Err(PresentationError::EmptyRelation);
        }
        Ok(Path { start: self.quiver.arrow(arrows[0]).source, arrows })
    }

    /// The unique arrow continuing `last` without hitting a relation, if any.
    /// On gentle presentations there is at most one.
    pub fn continuations(&self, last: usize) -> Vec<usize> {
        let t = self.quiver.arrow(last).target;
        self.quiver.outgoing(t).filter(|&b| !self.is_zero_pair(b, last)).collect()
    }

    /// Radical layers of the projective cover of the simple at `vertex`,
    /// truncated at `depth`. Depth zero returns just the top.
    pub fn radical_series(&self, vertex: &str, depth: usize) -> Result<RadicalLayerReport, PresentationError> {
        self.require_gentle()?;
        let q = &self.quiver;
        let v = q.vertex_index(vertex).ok_or_else(|| PresentationError::NoSuchVertex(vertex.to_string()))?;

        let mut layers = vec![vec![LayerEntry { path: Path::trivial(v), simple: v }]];
        let mut frontier = vec![Path::trivial(v)];
        for _ in 0..depth {
            let mut next = Vec::new();
            for p in &frontier {
                let end = p.end(q);
                for b in q.outgoing(end) {
                    if let PathValue::Path(np) = self.compose(&Path::arrow(q, b), p) {
                        next.push(np);
                    }
                }
            }
            next.sort();
            layers.push(next.iter().map(|p| LayerEntry { path: p.clone(), simple: p.end(q) }).collect());
            frontier = next;
        }

        let mut arms = Vec::new();
        for first in q.outgoing(v) {
            let mut paths = Vec::new();
            let mut cur = Path::arrow(q, first);
            while paths.len() < depth {
                paths.push(cur.clone());
                let last = *cur.arrows.last().unwrap();
                match self.continuations(last).first() {
                    Some(&b) => {
                        cur.arrows.push(b);
                    }
                    None => break,
                }
            }
            let simples = paths.iter().map(|p| p.end(q)).collect();
            arms.push(Arm { first_arrow: first, paths, simples });
        }

        Ok(RadicalLayerReport { vertex: v, depth, layers, arms })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerEntry {
    pub path: Path,
    pub simple: usize,
}

/// A maximal chain of nonzero paths obtained by extending one arrow out of
/// the vertex one step at a time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arm {
    pub first_arrow: usize,
    pub paths: Vec<Path>,
    /// Vertex (simple label) reached by each path.
    pub simples: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalLayerReport {
    pub vertex: usize,
    pub depth: usize,
    /// `layers[i]` lists the nonzero paths of length `i` out of the vertex.
    pub layers: Vec<Vec<LayerEntry>>,
    pub arms: Vec<Arm>,
}

impl RadicalLayerReport {
    /// Simple labels (`S1`, `S2`, ...) per layer.
    pub fn layer_labels(&self, q: &Quiver) -> Vec<Vec<String>> {
        self.layers.iter().map(|l| l.iter().map(|e| format!("S{}", q.vertex_name(e.simple))).collect()).collect()
    }

    pub fn arm_labels(&self, q: &Quiver) -> Vec<Vec<String>> {
        self.arms.iter().map(|a| a.simples.iter().map(|&s| format!("S{}", q.vertex_name(s))).collect()).collect()
    }

    pub fn render(&self, q: &Quiver) -> String {
        let mut out = String::new();
        out.push_str(&format!("P{} truncated at depth {}\n", q.vertex_name(self.vertex), self.depth));
        for (i, layer) in self.layers.iter().enumerate() {
            let cells: Vec<String> =
                layer.iter().map(|e| format!("S{} ({})", q.vertex_name(e.simple), e.path.render(q))).collect();
            out.push_str(&format!("  rad^{i}: {}\n", cells.join(", ")));
        }
        for (arm, labels) in self.arms.iter().zip(self.arm_labels(q)) {
            out.push_str(&format!("  arm {}: {}\n", q.arrow(arm.first_arrow).name, labels.join(" ")));
        }
        out
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relations.iter().map(|r| r.render(&self.quiver)).collect();
        write!(f, "{} = kQ/<{}>", self.name, rels.join(", "))
    }
}
