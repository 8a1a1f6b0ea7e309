//! Universal deformation rings via connecting letters and the sequence
//! of string modules they generate.
//!
//! For a string `w` with `End = k` and one-dimensional `Ext^1`, a
//! connecting letter `x` glues two copies of `w` into a longer string.
//! Repeating the gluing gives `V_0 = M[w], V_1, V_2, ...`; if the
//! repetition never hits a relation the ring is `k[[t]]`, and if it stops
//! after `V_N` (with the usual Hom/Ext checks on `V_N`) the ring is
//! `k[[t]]/(t^(N+1))`. Each `V_l` carries an endomorphism
//! `sigma_l = iota_l . eps_l` whose kernel and top image are copies of
//! `V_0`; those are built explicitly and checked.

use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::homext::{end_is_trivial, ext1_dim, hom_dim, HomExtError};
use crate::lifts::{fingerprint, LiftCensus};
use crate::linalg::{Matrix, PrimeField, Subspace};
use crate::module::{string_module, walk_positions, FinModule, ModuleError};
use crate::presentation::Presentation;
use crate::strings::{Letter, StringWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UdrKind {
    Field,
    TruncatedPowerSeries(u32),
    PowerSeries,
    Undetermined,
}

impl UdrKind {
    pub fn ring_name(&self) -> String {
        match self {
            UdrKind::Field => "k".into(),
            UdrKind::TruncatedPowerSeries(m) => format!("k[[t]]/(t^{m})"),
            UdrKind::PowerSeries => "k[[t]]".into(),
            UdrKind::Undetermined => "undetermined".into(),
        }
    }

    pub fn parse(s: &str) -> Option<UdrKind> {
        match s.trim() {
            "k" => Some(UdrKind::Field),
            "k[[t]]" => Some(UdrKind::PowerSeries),
            "undetermined" => Some(UdrKind::Undetermined),
            other => other
                .strip_prefix("k[[t]]/(t^")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|m| m.parse().ok())
                .filter(|&m| m >= 2)
                .map(UdrKind::TruncatedPowerSeries),
        }
    }

    pub fn is_determined(&self) -> bool {
        !matches!(self, UdrKind::Undetermined)
    }
}

impl Serialize for UdrKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.ring_name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UdrError {
    #[error("End({0}) is not k; a universal deformation ring is not guaranteed")]
    EndNotTrivial(String),
    #[error("`{0}` is not a connecting letter of this string")]
    NotConnecting(String),
    #[error("n_max must be at least 2")]
    BadNMax,
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    HomExt(#[from] HomExtError),
}

/// How the two copies of `w` are glued.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConnectingForm {
    /// `w x w`
    Forward,
    /// `w x w^-1`
    ReflectedEnd,
    /// `w^-1 x w`
    ReflectedStart,
}

impl ConnectingForm {
    pub fn is_reflected(self) -> bool {
        self != ConnectingForm::Forward
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectingLetter {
    pub letter: Letter,
    pub form: ConnectingForm,
    /// The glued word `V_1`.
    pub word: StringWord,
    pub rendered_letter: String,
    pub rendered_word: String,
}

fn glue(p: &Presentation, w: &StringWord, x: Letter, form: ConnectingForm) -> StringWord {
    let inv = w.inverse(p);
    let (first, second) = match form {
        ConnectingForm::Forward => (w, w),
        ConnectingForm::ReflectedEnd => (w, &inv),
        ConnectingForm::ReflectedStart => (&inv, w),
    };
    let mut out = StringWord { base: first.base, letters: first.letters.clone() };
    out.letters.push(x);
    out.letters.extend_from_slice(&second.letters);
    out
}

/// Letters `x` gluing two copies of `w` into a string, one per resulting
/// module, direct letters and the forward form first.
pub fn connecting_letters(p: &Presentation, w: &StringWord) -> Vec<ConnectingLetter> {
    let forms = [ConnectingForm::Forward, ConnectingForm::ReflectedEnd, ConnectingForm::ReflectedStart];
    let mut out: Vec<ConnectingLetter> = Vec::new();
    for form in forms {
        for x in Letter::all(p) {
            let v1 = glue(p, w, x, form);
            let (from, to) = match form {
                ConnectingForm::Forward => (w.end(p), w.base),
                ConnectingForm::ReflectedEnd => (w.end(p), w.end(p)),
                ConnectingForm::ReflectedStart => (w.base, w.base),
            };
            if x.source(p) != from || x.target(p) != to || !v1.is_valid(p) {
                continue;
            }
            let canon = v1.canonical(p);
            if out.iter().any(|c| c.word.canonical(p) == canon) {
                continue;
            }
            out.push(ConnectingLetter {
                letter: x,
                form,
                rendered_letter: x.render(p),
                rendered_word: v1.render(p),
                word: v1,
            });
        }
    }
    out.sort_by_key(|c| (c.letter.inverse, c.form != ConnectingForm::Forward, c.letter.arrow));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Termination {
    /// The gluing can be repeated without end.
    Infinite,
    /// The last constructible module is `V_n`.
    Finite { n: usize },
}

/// Checks on one `sigma_l`.
#[derive(Debug, Clone, Serialize)]
pub struct StepCheck {
    pub ell: usize,
    pub word: String,
    /// Which ends the collapse drops and re-inserts: `"last"` or `"first"`.
    pub eps_drops: &'static str,
    pub iota_skips: &'static str,
    pub eps_is_surjective_hom: bool,
    pub iota_is_injective_hom: bool,
    /// `sigma^(l+1) = 0`.
    pub nilpotent: bool,
    pub rank_top_power: usize,
    pub dim_v0: usize,
    /// Copy index of `V_0` whose embedding spans `ker sigma`.
    pub kernel_witness: Option<usize>,
    /// Copy index of `V_0` whose embedding spans `im sigma^l`.
    pub image_witness: Option<usize>,
    /// `sigma` on the total space, rows of the matrix.
    pub sigma: Vec<Vec<u32>>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SequenceReport {
    pub connecting: ConnectingLetter,
    /// The second gluing letter used by reflected forms.
    pub return_letter: Option<String>,
    pub termination: Termination,
    /// `V_0, V_1, ...` as words.
    pub words: Vec<String>,
    /// Largest `n` for which `V_n` was rebuilt and validated.
    pub validated_up_to: usize,
    pub steps: Vec<StepCheck>,
    pub all_steps_passed: bool,
}

/// The word `V_n` over copies `b, b^-1, b, ...` (or `b, b, b, ...`)
/// joined alternately by `x` and `y`.
fn sequence_word(
    p: &Presentation,
    b: &StringWord,
    x: Letter,
    y: Option<Letter>,
    reflected: bool,
    n: usize,
) -> StringWord {
    let inv = b.inverse(p);
    let mut out = b.clone();
    for j in 1..=n {
        let join = if reflected && j % 2 == 0 { y.expect("return letter") } else { x };
        out.letters.push(join);
        let copy = if reflected && j % 2 == 1 { &inv } else { b };
        out.letters.extend_from_slice(&copy.letters);
    }
    out
}

/// `sequence_word` is a string and each joining letter meets its copies
/// at the right vertices (an empty `b` does not pin them down).
fn sequence_valid(p: &Presentation, b: &StringWord, x: Letter, y: Option<Letter>, reflected: bool, n: usize) -> bool {
    let loops_at = |l: Letter, v: usize| l.source(p) == v && l.target(p) == v;
    let x_ok = if reflected { loops_at(x, b.end(p)) } else { x.source(p) == b.end(p) && x.target(p) == b.base };
    let y_ok = n < 2 || y.map_or(!reflected, |y| loops_at(y, b.base));
    (n == 0 || x_ok) && y_ok && sequence_word(p, b, x, y, reflected, n).is_valid(p)
}

/// Total-space index of basis vector `pos` (a position along `b`) in copy
/// `j` of a sequence word.
fn copy_index(len_b: usize, reflected: bool, j: usize, pos: usize) -> usize {
    let base = j * (len_b + 1);
    if reflected && j % 2 == 1 {
        base + (len_b - pos)
    } else {
        base + pos
    }
}

/// Matrix on total spaces sending copy `j` of `src` to copy `map(j)` of
/// `dst`, position by position.
fn copy_map(
    src: &FinModule,
    dst: &FinModule,
    len_b: usize,
    reflected: bool,
    src_copies: usize,
    map: impl Fn(usize) -> Option<usize>,
) -> Matrix {
    let sp = walk_positions(src).expect("string module");
    let dp = walk_positions(dst).expect("string module");
    let mut g = Matrix::zeros(src.field(), dst.total_dim(), src.total_dim());
    for j in 0..src_copies {
        if let Some(jt) = map(j) {
            for pos in 0..=len_b {
                let s = sp[copy_index(len_b, reflected, j, pos)];
                let t = dp[copy_index(len_b, reflected, jt, pos)];
                g.set(t, s, 1);
            }
        }
    }
    g
}

/// `g` commutes with every arrow (and so is a module map).
fn is_hom(src: &FinModule, dst: &FinModule, g: &Matrix) -> bool {
    let q = src.presentation().quiver();
    (0..q.num_arrows()).all(|a| dst.global_action(a).mul(g) == g.mul(&src.global_action(a)))
        && respects_vertices(src, dst, g)
}

fn respects_vertices(src: &FinModule, dst: &FinModule, g: &Matrix) -> bool {
    let so = src.offsets();
    let to = dst.offsets();
    let vertex_of =
        |offs: &[usize], dims: &[usize], i: usize| (0..dims.len()).find(|&v| i >= offs[v] && i < offs[v] + dims[v]);
    (0..g.rows()).all(|r| {
        (0..g.cols()).all(|c| g.get(r, c) == 0 || vertex_of(&to, dst.dims(), r) == vertex_of(&so, src.dims(), c))
    })
}

fn column_space(m: &Matrix) -> Subspace {
    let t = m.transpose();
    let rows: Vec<Vec<u32>> = (0..t.rows()).map(|r| t.row(r).to_vec()).collect();
    Subspace::spanned_by(m.field(), m.rows(), &rows)
}

fn same_subspace(a: &Subspace, b: &Subspace) -> bool {
    a.dim() == b.dim() && a.basis().iter().all(|v| b.contains(v))
}

/// An embedding of `V_0` as one copy inside `V_l` whose image is `target`.
fn copy_witness(
    v0: &FinModule,
    vl: &FinModule,
    len_b: usize,
    reflected: bool,
    copies: usize,
    target: &Subspace,
) -> Option<usize> {
    (0..copies).find(|&j| {
        // orientation of V_0 is copy 0; reversed copies reverse positions
        let g = {
            let sp = walk_positions(v0).expect("string module");
            let dp = walk_positions(vl).expect("string module");
            let mut g = Matrix::zeros(v0.field(), vl.total_dim(), v0.total_dim());
            for pos in 0..=len_b {
                g.set(dp[copy_index(len_b, reflected, j, pos)], sp[pos], 1);
            }
            g
        };
        g.rank() == v0.total_dim() && is_hom(v0, vl, &g) && same_subspace(&column_space(&g), target)
    })
}

fn step_check(
    v0: &FinModule,
    prev: &FinModule,
    cur: &FinModule,
    ell: usize,
    len_b: usize,
    reflected: bool,
    p: &Presentation,
) -> StepCheck {
    let mut best: Option<StepCheck> = None;
    for eps_drops in ["last", "first"] {
        for iota_skips in ["first", "last"] {
            let eps = copy_map(cur, prev, len_b, reflected, ell + 1, |j| match eps_drops {
                "last" => (j < ell).then_some(j),
                _ => j.checked_sub(1),
            });
            let iota = copy_map(prev, cur, len_b, reflected, ell, |j| match iota_skips {
                "first" => Some(j + 1),
                _ => Some(j),
            });
            let eps_ok = is_hom(cur, prev, &eps) && eps.rank() == prev.total_dim();
            let iota_ok = is_hom(prev, cur, &iota) && iota.rank() == prev.total_dim();
            let sigma = iota.mul(&eps);
            let nilpotent = sigma.pow(ell as u32 + 1).is_zero();
            let top = sigma.pow(ell as u32);
            let rank_top_power = top.rank();
            let kernel = Subspace::spanned_by(cur.field(), cur.total_dim(), &sigma.nullspace_basis());
            let image = column_space(&top);
            let kernel_witness = copy_witness(v0, cur, len_b, reflected, ell + 1, &kernel);
            let image_witness = copy_witness(v0, cur, len_b, reflected, ell + 1, &image);
            let passed = eps_ok
                && iota_ok
                && nilpotent
                && rank_top_power == v0.total_dim()
                && kernel_witness.is_some()
                && image_witness.is_some();
            let check = StepCheck {
                ell,
                word: cur.word().map_or_else(|| cur.label(), |w| w.render(p)),
                eps_drops,
                iota_skips,
                eps_is_surjective_hom: eps_ok,
                iota_is_injective_hom: iota_ok,
                nilpotent,
                rank_top_power,
                dim_v0: v0.total_dim(),
                kernel_witness,
                image_witness,
                sigma: (0..sigma.rows()).map(|r| sigma.row(r).to_vec()).collect(),
                passed,
            };
            let score = |c: &StepCheck| (c.passed, c.eps_is_surjective_hom && c.iota_is_injective_hom);
            if best.as_ref().is_none_or(|b| score(&check) > score(b)) {
                best = Some(check);
            }
        }
    }
    best.expect("four candidates")
}

/// Builds `V_0 .. V_n` for a connecting letter and checks each `sigma_l`.
pub fn build_sequence(
    p: &Arc<Presentation>,
    w: &StringWord,
    conn: &ConnectingLetter,
    n_max: usize,
    field: PrimeField,
) -> Result<SequenceReport, UdrError> {
    if n_max < 2 {
        return Err(UdrError::BadNMax);
    }
    if !connecting_letters(p, w).iter().any(|c| c.letter == conn.letter && c.form == conn.form) {
        return Err(UdrError::NotConnecting(conn.letter.render(p)));
    }
    let reflected = conn.form.is_reflected();
    let b = if conn.form == ConnectingForm::ReflectedStart { w.inverse(p) } else { w.clone() };
    let x = conn.letter;

    // reflected words need a second letter to return into b after b^-1
    let y =
        if reflected { Letter::all(p).into_iter().find(|&y| sequence_valid(p, &b, x, Some(y), true, 2)) } else { None };
    let v2_valid = sequence_valid(p, &b, x, y, reflected, 2);

    let (termination, top) = if v2_valid { (Termination::Infinite, n_max) } else { (Termination::Finite { n: 1 }, 1) };
    let validate_to = if v2_valid { n_max.max(4) } else { 1 };
    let mut words = Vec::new();
    let mut validated_up_to = 0;
    for n in 0..=validate_to {
        if !sequence_valid(p, &b, x, y, reflected, n) {
            break;
        }
        let word = sequence_word(p, &b, x, y, reflected, n);
        validated_up_to = n;
        if n <= top {
            words.push(word.render(p));
        }
    }

    let modules: Vec<FinModule> = (0..=top)
        .map(|n| string_module(p, &sequence_word(p, &b, x, y, reflected, n), field))
        .collect::<Result<_, _>>()?;
    let steps: Vec<StepCheck> = (1..=top)
        .map(|ell| step_check(&modules[0], &modules[ell - 1], &modules[ell], ell, b.len(), reflected, p))
        .collect();
    let all_steps_passed = steps.iter().all(|s| s.passed) && validated_up_to == validate_to;
    Ok(SequenceReport {
        connecting: conn.clone(),
        return_letter: y.map(|l| l.render(p)),
        termination,
        words,
        validated_up_to,
        steps,
        all_steps_passed,
    })
}

/// Hom/Ext checks on the last module of a finite sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FiniteHypotheses {
    pub hom_dim_vn_v: usize,
    pub ext1_dim_vn_v: usize,
    pub hold: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Evidence {
    pub tangent_dim: usize,
    pub connecting_letters: Vec<ConnectingLetter>,
    /// The letter the classification rests on, if any.
    pub decisive_letter: Option<String>,
    pub sequences: Vec<SequenceReport>,
    pub finite_hypotheses: Option<FiniteHypotheses>,
    pub census: Option<LiftCensus>,
    pub census_error: Option<String>,
    /// A determined ring agrees with the census at every level computed.
    pub census_consistent: Option<bool>,
    /// Why no ring was determined.
    pub undetermined_reason: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct UdrDescriptor {
    #[serde(rename = "ring")]
    pub kind: UdrKind,
    pub tangent_dim: usize,
    pub evidence: Evidence,
}

impl UdrDescriptor {
    /// The computed ring contradicts the census; this indicates a bug.
    pub fn is_inconsistent(&self) -> bool {
        self.evidence.census_consistent == Some(false)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct UdrOptions {
    pub n_max: usize,
    pub budget: u128,
    /// Compute the lift census (always needed for undetermined rows).
    pub census: bool,
}

impl Default for UdrOptions {
    fn default() -> Self {
        Self { n_max: 3, budget: 1 << 22, census: true }
    }
}

/// Runs the classification for `M[w]`.
pub fn universal_deformation_ring(
    p: &Arc<Presentation>,
    w: &StringWord,
    field: PrimeField,
    opts: &UdrOptions,
) -> Result<UdrDescriptor, UdrError> {
    if opts.n_max < 2 {
        return Err(UdrError::BadNMax);
    }
    let v = string_module(p, w, field)?;
    if !end_is_trivial(&v) {
        return Err(UdrError::EndNotTrivial(w.render(p)));
    }
    let tangent = ext1_dim(&v, &v)?;
    let conns = connecting_letters(p, w);
    let mut evidence = Evidence {
        tangent_dim: tangent,
        connecting_letters: conns.clone(),
        decisive_letter: None,
        sequences: Vec::new(),
        finite_hypotheses: None,
        census: None,
        census_error: None,
        census_consistent: None,
        undetermined_reason: None,
    };

    let mut kind = UdrKind::Undetermined;
    if tangent == 0 {
        kind = UdrKind::Field;
    } else if tangent > 1 {
        evidence.undetermined_reason = Some(format!("tangent dimension {tangent}"));
    } else if conns.is_empty() {
        evidence.undetermined_reason = Some("no connecting letter".into());
    } else {
        for c in &conns {
            let seq = build_sequence(p, w, c, opts.n_max, field)?;
            let decided = match seq.termination {
                Termination::Infinite if seq.all_steps_passed => Some(UdrKind::PowerSeries),
                Termination::Finite { n } if seq.all_steps_passed => {
                    let b = if c.form == ConnectingForm::ReflectedStart { w.inverse(p) } else { w.clone() };
                    let y = None;
                    let vn = string_module(p, &sequence_word(p, &b, c.letter, y, c.form.is_reflected(), n), field)?;
                    let h = FiniteHypotheses {
                        hom_dim_vn_v: hom_dim(&vn, &v)?,
                        ext1_dim_vn_v: ext1_dim(&vn, &v)?,
                        hold: false,
                    };
                    let h = FiniteHypotheses { hold: h.hom_dim_vn_v == 1 && h.ext1_dim_vn_v == 0, ..h };
                    evidence.finite_hypotheses = Some(h);
                    h.hold.then_some(UdrKind::TruncatedPowerSeries(n as u32 + 1))
                }
                _ => None,
            };
            evidence.sequences.push(seq);
            if let Some(k) = decided {
                kind = k;
                evidence.decisive_letter = Some(c.rendered_letter.clone());
                break;
            }
        }
        if kind == UdrKind::Undetermined {
            evidence.undetermined_reason = Some("sequence checks failed for every connecting letter".into());
        }
    }

    if opts.census || !kind.is_determined() {
        match fingerprint(&v, opts.n_max, opts.budget) {
            Ok(c) => {
                if kind.is_determined() {
                    evidence.census_consistent = Some(c.matches_kind(&kind));
                }
                evidence.census = Some(c);
            }
            Err(e) => evidence.census_error = Some(e.to_string()),
        }
    }
    Ok(UdrDescriptor { kind, tangent_dim: tangent, evidence })
}
