//! The fifteen two-point infinite-dimensional gentle algebras.
//!
//! Entries are keyed `Q1` .. `Q8c`: the number is the quiver (Q', Q'', Q''',
//! Q(iv) .. Q(viii)) and the letter picks the ideal when a quiver carries
//! several. `Q8a` is the algebra used for the worked example,
//! `kQ/<a^2, b^2, dc, cd>`.

use std::sync::Arc;

use serde::Serialize;

use crate::dsl::parse_presentation;
use crate::presentation::Presentation;

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub quiver_label: &'static str,
    /// Present when arrow labels had to be changed so that the ideal only
    /// mentions drawn arrows.
    pub relabeling: Option<&'static str>,
    #[serde(skip)]
    pub presentation: Arc<Presentation>,
}

struct Raw {
    name: &'static str,
    quiver_label: &'static str,
    arrows: &'static str,
    relations: &'static str,
    relabeling: Option<&'static str>,
}

const Q3_ARROWS: &str = "a: 1 -> 2 ; b: 1 -> 2 ; c: 2 -> 1 ; d: 2 -> 1";
const Q6_ARROWS: &str = "a: 1 -> 1 ; b: 1 -> 2 ; c: 2 -> 1";
const Q7_ARROWS: &str = "a: 1 -> 1 ; c: 1 -> 2 ; b: 2 -> 2";
const Q8_ARROWS: &str = "a: 1 -> 1 ; c: 1 -> 2 ; d: 2 -> 1 ; b: 2 -> 2";

const RAW: [Raw; 15] = [
    Raw { name: "Q1", quiver_label: "Q'", arrows: "a: 1 -> 2 ; b: 2 -> 1", relations: "", relabeling: None },
    Raw {
        name: "Q2",
        quiver_label: "Q''",
        arrows: "a: 1 -> 2 ; b: 1 -> 2 ; c: 2 -> 1",
        relations: "a*c ; c*a",
        relabeling: Some(
            "the outer arrow 1 -> 2 was drawn as `c`, clashing with the arrow 2 -> 1; it is named `a` so that <ac, ca> refers to existing arrows",
        ),
    },
    Raw {
        name: "Q3a",
        quiver_label: "Q'''",
        arrows: Q3_ARROWS,
        relations: "c*a ; d*b ; a*c ; b*d",
        relabeling: None,
    },
    Raw {
        name: "Q3b",
        quiver_label: "Q'''",
        arrows: Q3_ARROWS,
        relations: "c*a ; d*b ; b*c ; a*d",
        relabeling: None,
    },
    Raw { name: "Q4", quiver_label: "Q(iv)", arrows: "a: 1 -> 1 ; b: 1 -> 2", relations: "b*a", relabeling: None },
    Raw { name: "Q5", quiver_label: "Q(v)", arrows: "b: 1 -> 2 ; a: 2 -> 2", relations: "a*b", relabeling: None },
    Raw { name: "Q6a", quiver_label: "Q(vi)", arrows: Q6_ARROWS, relations: "a*a ; b*c", relabeling: None },
    Raw { name: "Q6b", quiver_label: "Q(vi)", arrows: Q6_ARROWS, relations: "b*a ; a*c", relabeling: None },
    Raw { name: "Q6c", quiver_label: "Q(vi)", arrows: Q6_ARROWS, relations: "b*a ; a*c ; c*b", relabeling: None },
    Raw { name: "Q7a", quiver_label: "Q(vii)", arrows: Q7_ARROWS, relations: "a*a ; b*c", relabeling: None },
    Raw { name: "Q7b", quiver_label: "Q(vii)", arrows: Q7_ARROWS, relations: "c*a ; b*b", relabeling: None },
    Raw { name: "Q7c", quiver_label: "Q(vii)", arrows: Q7_ARROWS, relations: "c*a ; b*c", relabeling: None },
    Raw { name: "Q8a", quiver_label: "Q(viii)", arrows: Q8_ARROWS, relations: "a*a ; b*b ; d*c ; c*d", relabeling: None },
    Raw { name: "Q8b", quiver_label: "Q(viii)", arrows: Q8_ARROWS, relations: "a*a ; d*b ; b*c ; c*d", relabeling: None },
    Raw { name: "Q8c", quiver_label: "Q(viii)", arrows: Q8_ARROWS, relations: "c*a ; d*b ; b*c ; a*d", relabeling: None },
];

/// The name of the worked-example algebra `kQ(viii)/<a^2, b^2, dc, cd>`.
pub const LAMBDA0: &str = "Q8a";

fn build(raw: &Raw) -> CatalogEntry {
    let text = format!("name: {}\nvertices: 1 2\narrows: {}\nrelations: {}\n", raw.name, raw.arrows, raw.relations);
    let p = parse_presentation(&text)
        .unwrap_or_else(|e| panic!("catalog entry {} does not parse: {e}", raw.name))
        .into_gentle()
        .unwrap_or_else(|r| panic!("catalog entry {} is not gentle: {:?}", raw.name, r.violations));
    CatalogEntry {
        name: raw.name,
        quiver_label: raw.quiver_label,
        relabeling: raw.relabeling,
        presentation: Arc::new(p),
    }
}

/// All fifteen presentations, gentle-validated, in a fixed order.
pub fn table1_catalog() -> Vec<CatalogEntry> {
    RAW.iter().map(build).collect()
}

pub fn lookup(name: &str) -> Option<CatalogEntry> {
    RAW.iter().find(|r| r.name.eq_ignore_ascii_case(name)).map(build)
}

/// Finds the catalog entry with the same quiver and ideal, if any.
pub fn identify(p: &Presentation) -> Option<CatalogEntry> {
    table1_catalog().into_iter().find(|e| e.presentation.same_algebra(p))
}

pub fn lambda0() -> Arc<Presentation> {
    lookup(LAMBDA0).expect("Q8a is in the catalog").presentation
}
