//! Line-oriented text format for presentations.
//!
//! ```text
//! # comments start with '#'
//! name: lambda0
//! vertices: 1 2
//! arrows: a: 1 -> 1 ; c: 1 -> 2 ; d: 2 -> 1 ; b: 2 -> 2
//! relations: a*a ; b*b ; d*c ; c*d
//! ```
//!
//! `x*y` means `x` after `y`. Keys may repeat; their items accumulate.

use thiserror::Error;

use crate::presentation::{Presentation, PresentationError, Quiver};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct DslError {
    pub line: usize,
    pub message: String,
}

impl DslError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self { line, message: message.into() }
    }
}

pub fn parse_presentation(text: &str) -> Result<Presentation, DslError> {
    let mut name: Option<String> = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut vertex_line = 0;
    let mut arrows: Vec<(String, String, String, usize)> = Vec::new();
    let mut relations: Vec<(Vec<String>, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| DslError::new(line_no, format!("expected `key: value`, got `{line}`")))?;
        let rest = rest.trim();
        match key.trim() {
            "name" => name = Some(rest.to_string()),
            "vertices" => {
                vertex_line = line_no;
                vertices.extend(rest.split_whitespace().map(str::to_string));
            }
            "arrows" => {
                for item in rest.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                    let (aname, ends) = item
                        .split_once(':')
                        .ok_or_else(|| DslError::new(line_no, format!("arrow `{item}` should read `name: s -> t`")))?;
                    let (s, t) = ends
                        .split_once("->")
                        .ok_or_else(|| DslError::new(line_no, format!("arrow `{item}` is missing `->`")))?;
                    let (aname, s, t) = (aname.trim(), s.trim(), t.trim());
                    if aname.is_empty() || s.is_empty() || t.is_empty() {
                        return Err(DslError::new(line_no, format!("incomplete arrow `{item}`")));
                    }
                    if aname.contains(['*', '~']) || aname.chars().any(char::is_whitespace) {
                        return Err(DslError::new(line_no, format!("invalid arrow name `{aname}`")));
                    }
                    arrows.push((aname.to_string(), s.to_string(), t.to_string(), line_no));
                }
            }
            "relations" => {
                for item in rest.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                    let word: Vec<String> = item.split('*').map(|x| x.trim().to_string()).collect();
                    if word.iter().any(String::is_empty) {
                        return Err(DslError::new(line_no, format!("malformed relation `{item}`")));
                    }
                    relations.push((word, line_no));
                }
            }
            other => return Err(DslError::new(line_no, format!("unknown key `{other}`"))),
        }
    }

    if vertices.is_empty() {
        return Err(DslError::new(text.lines().count().max(1), "no `vertices:` line"));
    }
    let triples: Vec<(&str, &str, &str)> =
        arrows.iter().map(|(n, s, t, _)| (n.as_str(), s.as_str(), t.as_str())).collect();
    let vrefs: Vec<&str> = vertices.iter().map(String::as_str).collect();
    let quiver = Quiver::new(&vrefs, &triples).map_err(|e| {
        let line = match &e {
            PresentationError::DuplicateArrow(n) | PresentationError::UnknownVertex { arrow: n, .. } => {
                arrows.iter().find(|a| &a.0 == n).map_or(vertex_line, |a| a.3)
            }
            _ => vertex_line,
        };
        DslError::new(line, e.to_string())
    })?;

    // Build relations one at a time so an error can be pinned to its line.
    let mut accepted: Vec<Vec<String>> = Vec::new();
    for (word, line_no) in &relations {
        accepted.push(word.clone());
        Presentation::new("", quiver.clone(), &accepted).map_err(|e| DslError::new(*line_no, e.to_string()))?;
    }
    Presentation::new(name.unwrap_or_else(|| "unnamed".to_string()), quiver, &accepted)
        .map_err(|e| DslError::new(relations.last().map_or(0, |r| r.1), e.to_string()))
}

/// Renders a presentation back into the text format.
pub fn to_dsl(p: &Presentation) -> String {
    let q = p.quiver();
    let arrows: Vec<String> = q
        .arrows()
        .iter()
        .map(|a| format!("{}: {} -> {}", a.name, q.vertex_name(a.source), q.vertex_name(a.target)))
        .collect();
    let rels: Vec<String> = p.relations().iter().map(|r| r.render(q)).collect();
    format!(
        "name: {}\nvertices: {}\narrows: {}\nrelations: {}\n",
        p.name(),
        q.vertices().join(" "),
        arrows.join(" ; "),
        rels.join(" ; ")
    )
}
