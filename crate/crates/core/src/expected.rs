//! Published values the computations are compared against.
//!
//! The table lives in `data/expected.json` so that every comparison can be
//! audited without reading code.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::presentation::Presentation;
use crate::strings::{make_string, word_isomorphic, StringWord};
use crate::udr::UdrKind;

const RAW: &str = include_str!("../data/expected.json");

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct ExpectedTable {
    pub algebras: Vec<ExpectedAlgebra>,
    pub trichotomy: Vec<String>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct ExpectedAlgebra {
    pub algebra: String,
    pub end_trivial: Option<ExpectedEndList>,
    #[serde(default)]
    pub rings: Vec<ExpectedRing>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct ExpectedEndList {
    pub source: String,
    /// The list claims to contain every `End = k` module.
    pub exhaustive: bool,
    pub modules: Vec<String>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct ExpectedRing {
    pub module: String,
    pub ring: String,
    pub source: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Agreement {
    Agrees,
    Disagrees,
    NotStated,
}

pub fn table() -> &'static ExpectedTable {
    static TABLE: OnceLock<ExpectedTable> = OnceLock::new();
    TABLE.get_or_init(|| serde_json::from_str(RAW).expect("data/expected.json is valid"))
}

impl ExpectedTable {
    pub fn algebra(&self, name: &str) -> Option<&ExpectedAlgebra> {
        self.algebras.iter().find(|a| a.algebra == name)
    }

    pub fn trichotomy_kinds(&self) -> Vec<UdrKind> {
        self.trichotomy.iter().filter_map(|s| UdrKind::parse(s)).collect()
    }
}

impl ExpectedAlgebra {
    pub fn ring_for(&self, p: &Presentation, w: &StringWord) -> Option<&ExpectedRing> {
        self.rings.iter().find(|r| make_string(p, &r.module).is_ok_and(|e| word_isomorphic(p, &e, w)))
    }

    pub fn end_list(&self, p: &Presentation) -> Option<Vec<StringWord>> {
        self.end_trivial
            .as_ref()
            .map(|l| l.modules.iter().map(|m| make_string(p, m).expect("expected module parses")).collect())
    }
}

/// Compares a computed ring with the stated one, if any.
pub fn ring_agreement(computed: UdrKind, stated: Option<&ExpectedRing>) -> Agreement {
    match stated.and_then(|e| UdrKind::parse(&e.ring)) {
        None => Agreement::NotStated,
        Some(k) if k == computed => Agreement::Agrees,
        Some(_) => Agreement::Disagrees,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{lambda0, LAMBDA0};

    #[test]
    fn table_parses_and_resolves() {
        let t = table();
        assert_eq!(t.trichotomy_kinds().len(), 3);
        let p = lambda0();
        let a = t.algebra(LAMBDA0).unwrap();
        assert_eq!(a.end_list(&p).unwrap().len(), 10);
        assert_eq!(a.rings.len(), 10);
        for r in &a.rings {
            assert!(UdrKind::parse(&r.ring).is_some(), "{}", r.ring);
        }
        let bca = make_string(&p, "~a*~c*~b").unwrap();
        assert_eq!(a.ring_for(&p, &bca).unwrap().ring, "k[[t]]");
    }

    #[test]
    fn agreement_flags() {
        let stated = ExpectedRing { module: "c".into(), ring: "k".into(), source: String::new() };
        assert_eq!(ring_agreement(UdrKind::Field, Some(&stated)), Agreement::Agrees);
        assert_eq!(ring_agreement(UdrKind::Undetermined, Some(&stated)), Agreement::Disagrees);
        assert_eq!(ring_agreement(UdrKind::Field, None), Agreement::NotStated);
    }
}
