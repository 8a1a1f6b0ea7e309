//! Per-module reports and the catalog-wide sweep.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{table1_catalog, CatalogEntry};
use crate::expected::{ring_agreement, table, Agreement};
use crate::homext::{brute_force_ext, classify_trivial_end, ext1_dim, HomExtError};
use crate::linalg::{LinalgError, PrimeField};
use crate::module::string_module;
use crate::presentation::Presentation;
use crate::strings::{word_isomorphic, StringWord};
use crate::udr::{universal_deformation_ring, UdrDescriptor, UdrError, UdrKind, UdrOptions};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error(transparent)]
    Field(#[from] LinalgError),
    #[error("n_max must be at least 2, got {0}")]
    NMax(usize),
    #[error("budget must be positive")]
    Budget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub q: u32,
    pub max_len: usize,
    pub n_max: usize,
    pub budget: u128,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { q: 2, max_len: 6, n_max: 3, budget: 1 << 22 }
    }
}

impl RunConfig {
    pub fn field(&self) -> Result<PrimeField, ConfigError> {
        let f = PrimeField::new(self.q)?;
        if self.n_max < 2 {
            return Err(ConfigError::NMax(self.n_max));
        }
        if self.budget == 0 {
            return Err(ConfigError::Budget);
        }
        Ok(f)
    }

    pub fn udr_options(&self) -> UdrOptions {
        UdrOptions { n_max: self.n_max, budget: self.budget, census: true }
    }
}

/// Where a census puts the module relative to the three candidate rings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trichotomy {
    Inside,
    Outside,
    NoCensus,
}

#[derive(Debug, Clone, Serialize)]
pub struct UdrReport {
    pub algebra: String,
    pub module: String,
    pub dims: Vec<usize>,
    pub ext1_dim: usize,
    pub brute_force_ext: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brute_force_note: Option<String>,
    #[serde(flatten)]
    pub descriptor: UdrDescriptor,
    pub published_ring: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub published_source: Option<String>,
    pub published_agreement: Agreement,
    /// Whether the module appearing here matches a published `End = k` list.
    pub end_agreement: Agreement,
    pub trichotomy: Trichotomy,
}

impl UdrReport {
    /// Drops the sigma matrices, keeping the pass/fail flags.
    pub fn compact(mut self) -> Self {
        for s in &mut self.descriptor.evidence.sequences {
            for step in &mut s.steps {
                step.sigma.clear();
            }
        }
        self
    }

    pub fn oracle_mismatch(&self) -> bool {
        self.brute_force_ext.is_some_and(|b| b != self.ext1_dim)
    }
}

fn end_agreement(algebra: &str, p: &Presentation, w: &StringWord) -> Agreement {
    match table().algebra(algebra).and_then(|a| a.end_list(p)) {
        None => Agreement::NotStated,
        Some(list) if list.iter().any(|e| word_isomorphic(p, e, w)) => Agreement::Agrees,
        Some(_) if table().algebra(algebra).and_then(|a| a.end_trivial.as_ref()).is_some_and(|l| l.exhaustive) => {
            Agreement::Disagrees
        }
        Some(_) => Agreement::NotStated,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReportError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Udr(#[from] UdrError),
    #[error(transparent)]
    HomExt(#[from] HomExtError),
    #[error(transparent)]
    Module(#[from] crate::module::ModuleError),
}

/// Runs the whole pipeline on `M[w]`.
pub fn analyze(
    algebra: &str,
    p: &Arc<Presentation>,
    w: &StringWord,
    cfg: &RunConfig,
) -> Result<UdrReport, ReportError> {
    let field = cfg.field()?;
    let descriptor = universal_deformation_ring(p, w, field, &cfg.udr_options())?;
    let v = string_module(p, w, field)?;
    let ext = ext1_dim(&v, &v)?;
    let (bf, note) = match brute_force_ext(&v, &v, cfg.budget) {
        Ok(e) => (Some(e), None),
        Err(e @ HomExtError::BudgetExceeded { .. }) => (None, Some(format!("skipped: {e}"))),
        Err(e) => (None, Some(e.to_string())),
    };
    let stated = table().algebra(algebra).and_then(|a| a.ring_for(p, w));
    let trichotomy = match &descriptor.evidence.census {
        None => Trichotomy::NoCensus,
        Some(c) if c.matches.is_empty() => Trichotomy::Outside,
        Some(_) => Trichotomy::Inside,
    };
    Ok(UdrReport {
        algebra: algebra.to_string(),
        module: w.render(p),
        dims: v.dims().to_vec(),
        ext1_dim: ext,
        brute_force_ext: bf,
        brute_force_note: note,
        published_ring: stated.map(|s| s.ring.clone()),
        published_source: stated.map(|s| s.source.clone()),
        published_agreement: ring_agreement(descriptor.kind, stated),
        end_agreement: end_agreement(algebra, p, w),
        trichotomy,
        descriptor,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub algebra: String,
    pub module: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<UdrReport>,
}

/// One comparison with a published value.
#[derive(Debug, Clone, Serialize)]
pub struct LedgerEntry {
    pub algebra: String,
    pub module: String,
    /// `"ring"` or `"end"`.
    pub aspect: &'static str,
    pub computed: String,
    pub published: String,
    pub source: String,
    pub agreement: Agreement,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SweepSummary {
    pub algebras: usize,
    pub modules: usize,
    pub rings: BTreeMap<String, usize>,
    pub published_disagreements: usize,
    pub end_disagreements: usize,
    pub outside_trichotomy: usize,
    pub oracle_mismatches: usize,
    pub census_inconsistencies: usize,
    pub row_errors: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub config: RunConfig,
    pub summary: SweepSummary,
    pub ledger: Vec<LedgerEntry>,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// Rows where two independent computations disagree.
    pub fn has_internal_inconsistency(&self) -> bool {
        self.summary.oracle_mismatches > 0 || self.summary.census_inconsistencies > 0
    }

    pub fn rows_for(&self, algebra: &str) -> impl Iterator<Item = &SweepRow> {
        let a = algebra.to_string();
        self.rows.iter().filter(move |r| r.algebra == a)
    }
}

/// Classifies every `End = k` string module up to `cfg.max_len` over the
/// selected catalog entries (all of them when `only` is `None`).
pub fn sweep(cfg: &RunConfig, only: Option<&[String]>) -> Result<SweepReport, ConfigError> {
    let field = cfg.field()?;
    let entries: Vec<CatalogEntry> = table1_catalog()
        .into_iter()
        .filter(|e| only.is_none_or(|names| names.iter().any(|n| n.eq_ignore_ascii_case(e.name))))
        .collect();
    let tasks: Vec<(usize, StringWord)> = entries
        .par_iter()
        .enumerate()
        .map(|(i, e)| {
            classify_trivial_end(&e.presentation, cfg.max_len, field).into_iter().map(|w| (i, w)).collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let rows: Vec<SweepRow> = tasks
        .par_iter()
        .map(|(i, w)| {
            let e = &entries[*i];
            let module = w.render(&e.presentation);
            match analyze(e.name, &e.presentation, w, cfg) {
                Ok(r) => SweepRow { report: Some(r.compact()), algebra: e.name.to_string(), module, error: None },
                Err(err) => {
                    SweepRow { report: None, algebra: e.name.to_string(), module, error: Some(err.to_string()) }
                }
            }
        })
        .collect();

    let mut ledger = Vec::new();
    for e in &entries {
        let Some(exp) = table().algebra(e.name) else { continue };
        let p = &e.presentation;
        let here: Vec<&UdrReport> =
            rows.iter().filter(|r| r.algebra == e.name).filter_map(|r| r.report.as_ref()).collect();
        for r in &exp.rings {
            let w = crate::strings::make_string(p, &r.module).expect("expected module parses");
            let row = here.iter().find(|x| x.module == w.canonical(p).render(p));
            let (computed, agreement) = match row {
                Some(x) => (describe(x), x.published_agreement),
                None => ("End is not k (no ring computed)".to_string(), Agreement::Disagrees),
            };
            ledger.push(LedgerEntry {
                algebra: e.name.to_string(),
                module: r.module.clone(),
                aspect: "ring",
                computed,
                published: r.ring.clone(),
                source: r.source.clone(),
                agreement,
            });
        }
        if let (Some(list), Some(words)) = (&exp.end_trivial, exp.end_list(p)) {
            for (name, w) in list.modules.iter().zip(&words) {
                if w.len() > cfg.max_len {
                    continue;
                }
                let found = here.iter().any(|x| x.module == w.canonical(p).render(p));
                ledger.push(LedgerEntry {
                    algebra: e.name.to_string(),
                    module: name.clone(),
                    aspect: "end",
                    computed: if found { "End = k".into() } else { "End is not k".into() },
                    published: "End = k".into(),
                    source: list.source.clone(),
                    agreement: if found { Agreement::Agrees } else { Agreement::Disagrees },
                });
            }
            for x in here.iter().filter(|x| x.end_agreement == Agreement::Disagrees) {
                ledger.push(LedgerEntry {
                    algebra: e.name.to_string(),
                    module: x.module.clone(),
                    aspect: "end",
                    computed: "End = k".into(),
                    published: "End is not k (absent from an exhaustive list)".into(),
                    source: list.source.clone(),
                    agreement: Agreement::Disagrees,
                });
            }
        }
    }

    let mut summary = SweepSummary { algebras: entries.len(), modules: rows.len(), ..Default::default() };
    for row in &rows {
        match &row.report {
            None => summary.row_errors += 1,
            Some(r) => {
                *summary.rings.entry(r.descriptor.kind.ring_name()).or_default() += 1;
                if r.trichotomy == Trichotomy::Outside {
                    summary.outside_trichotomy += 1;
                }
                if r.oracle_mismatch() {
                    summary.oracle_mismatches += 1;
                }
                if r.descriptor.is_inconsistent() {
                    summary.census_inconsistencies += 1;
                }
            }
        }
    }
    summary.published_disagreements =
        ledger.iter().filter(|l| l.aspect == "ring" && l.agreement == Agreement::Disagrees).count();
    summary.end_disagreements =
        ledger.iter().filter(|l| l.aspect == "end" && l.agreement == Agreement::Disagrees).count();
    Ok(SweepReport { config: *cfg, summary, ledger, rows })
}

fn describe(r: &UdrReport) -> String {
    let census = r
        .descriptor
        .evidence
        .census
        .as_ref()
        .map(|c| format!(", census {}", census_string(&c.counts())))
        .unwrap_or_default();
    format!("{} (tangent dim {}{census})", r.descriptor.kind.ring_name(), r.descriptor.tangent_dim)
}

pub fn census_string(counts: &[u128]) -> String {
    let parts: Vec<String> = counts.iter().map(u128::to_string).collect();
    format!("({})", parts.join(","))
}

fn agreement_str(a: Agreement) -> &'static str {
    match a {
        Agreement::Agrees => "agrees",
        Agreement::Disagrees => "disagrees",
        Agreement::NotStated => "not-stated",
    }
}

/// Markdown rendering of a single report.
pub fn udr_markdown(r: &UdrReport) -> String {
    let mut s = String::new();
    let ev = &r.descriptor.evidence;
    let _ = writeln!(s, "## {} over {}\n", r.module, r.algebra);
    let _ = writeln!(s, "- dims: {:?}", r.dims);
    let _ = writeln!(s, "- ring: `{}`", r.descriptor.kind.ring_name());
    let _ = writeln!(s, "- tangent dim (Ext^1): {}", r.descriptor.tangent_dim);
    match r.brute_force_ext {
        Some(b) => {
            let _ = writeln!(s, "- brute-force Ext^1: {b}");
        }
        None => {
            let _ = writeln!(s, "- brute-force Ext^1: {}", r.brute_force_note.as_deref().unwrap_or("n/a"));
        }
    }
    let letters: Vec<String> = ev
        .connecting_letters
        .iter()
        .map(|c| format!("{} ({:?}: {})", c.rendered_letter, c.form, c.rendered_word))
        .collect();
    let _ =
        writeln!(s, "- connecting letters: {}", if letters.is_empty() { "none".into() } else { letters.join(", ") });
    for seq in &ev.sequences {
        let steps: Vec<String> =
            seq.steps.iter().map(|st| format!("l={} {}", st.ell, if st.passed { "ok" } else { "FAIL" })).collect();
        let _ = writeln!(
            s,
            "- sequence via {}: {:?}, valid to n={}, sigma checks [{}]",
            seq.connecting.rendered_letter,
            seq.termination,
            seq.validated_up_to,
            steps.join(", ")
        );
    }
    if let Some(h) = ev.finite_hypotheses {
        let _ = writeln!(s, "- dim Hom(V_N, V) = {}, dim Ext^1(V_N, V) = {}", h.hom_dim_vn_v, h.ext1_dim_vn_v);
    }
    if let Some(c) = &ev.census {
        let _ =
            writeln!(s, "- census (q = {}): {} matches [{}]", c.q, census_string(&c.counts()), c.matches.join(", "));
    }
    if let Some(e) = &ev.census_error {
        let _ = writeln!(s, "- census: {e}");
    }
    if let Some(why) = &ev.undetermined_reason {
        let _ = writeln!(s, "- undetermined: {why}");
    }
    let _ = writeln!(
        s,
        "- published: {} ({})",
        r.published_ring.as_deref().unwrap_or("none"),
        agreement_str(r.published_agreement)
    );
    s
}

pub fn sweep_markdown(rep: &SweepReport) -> String {
    let mut s = String::new();
    let c = &rep.config;
    let _ = writeln!(s, "# Sweep (q = {}, max length {}, n_max {})\n", c.q, c.max_len, c.n_max);
    let sm = &rep.summary;
    let _ = writeln!(s, "{} algebras, {} modules with End = k.\n", sm.algebras, sm.modules);
    for (ring, n) in &sm.rings {
        let _ = writeln!(s, "- `{ring}`: {n}");
    }
    let _ = writeln!(
        s,
        "- published ring disagreements: {}\n- End list disagreements: {}\n- outside the three rings: {}\n- oracle mismatches: {}\n- census inconsistencies: {}\n- row errors: {}\n",
        sm.published_disagreements,
        sm.end_disagreements,
        sm.outside_trichotomy,
        sm.oracle_mismatches,
        sm.census_inconsistencies,
        sm.row_errors
    );
    if !rep.ledger.is_empty() {
        let _ = writeln!(s, "## Comparison ledger\n");
        let _ = writeln!(s, "| algebra | module | aspect | computed | published | agreement |");
        let _ = writeln!(s, "|---|---|---|---|---|---|");
        for l in &rep.ledger {
            let _ = writeln!(
                s,
                "| {} | `{}` | {} | {} | {} | {} |",
                l.algebra,
                l.module,
                l.aspect,
                l.computed,
                l.published,
                agreement_str(l.agreement)
            );
        }
        let _ = writeln!(s);
    }
    let mut current = "";
    for row in &rep.rows {
        if row.algebra != current {
            current = &row.algebra;
            let _ = writeln!(s, "## {current}\n");
            let _ = writeln!(s, "| module | dims | Ext^1 | brute force | ring | census | published |");
            let _ = writeln!(s, "|---|---|---|---|---|---|---|");
        }
        match &row.report {
            Some(r) => {
                let census = r
                    .descriptor
                    .evidence
                    .census
                    .as_ref()
                    .map(|c| census_string(&c.counts()))
                    .unwrap_or_else(|| "-".into());
                let bf = r.brute_force_ext.map_or("-".to_string(), |b| b.to_string());
                let published = match &r.published_ring {
                    Some(p) => format!("{p} ({})", agreement_str(r.published_agreement)),
                    None => "-".into(),
                };
                let _ = writeln!(
                    s,
                    "| `{}` | {:?} | {} | {} | `{}` | {} | {} |",
                    r.module,
                    r.dims,
                    r.ext1_dim,
                    bf,
                    r.descriptor.kind.ring_name(),
                    census,
                    published
                );
            }
            None => {
                let _ = writeln!(
                    s,
                    "| `{}` | - | - | - | error: {} | - | - |",
                    row.module,
                    row.error.as_deref().unwrap_or("")
                );
            }
        }
    }
    s
}

/// Whether a determined kind is one of the three published candidates.
pub fn in_trichotomy(kind: UdrKind) -> bool {
    table().trichotomy_kinds().contains(&kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::LAMBDA0;

    #[test]
    fn config_validation() {
        assert!(RunConfig::default().field().is_ok());
        assert!(RunConfig { q: 4, ..Default::default() }.field().is_err());
        assert_eq!(RunConfig { n_max: 1, ..Default::default() }.field().unwrap_err(), ConfigError::NMax(1));
        assert_eq!(RunConfig { budget: 0, ..Default::default() }.field().unwrap_err(), ConfigError::Budget);
    }

    #[test]
    fn empty_filter_gives_empty_report() {
        let rep = sweep(&RunConfig::default(), Some(&[])).unwrap();
        assert!(rep.rows.is_empty());
        assert_eq!(rep.summary.modules, 0);
    }

    #[test]
    fn lambda0_rows_at_length_three() {
        let cfg = RunConfig { max_len: 3, ..Default::default() };
        let rep = sweep(&cfg, Some(&[LAMBDA0.to_string()])).unwrap();
        assert_eq!(rep.rows.len(), 10);
        assert!(rep.rows.iter().any(|r| r.module == "b*c*a"));
        assert_eq!(rep.ledger.iter().filter(|l| l.aspect == "ring").count(), 10);
        assert!(!rep.has_internal_inconsistency());
    }

    #[test]
    fn sweep_is_deterministic() {
        let cfg = RunConfig { max_len: 3, ..Default::default() };
        let names = ["Q8a".to_string(), "Q2".to_string()];
        let a = serde_json::to_string(&sweep(&cfg, Some(&names)).unwrap()).unwrap();
        let b = serde_json::to_string(&sweep(&cfg, Some(&names)).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
