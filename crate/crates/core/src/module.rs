//! Finite-dimensional representations over a prime field.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{Matrix, PrimeField};
use crate::presentation::Presentation;
use crate::strings::{StringWord, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("expected {expected} dimensions, got {got}")]
    DimensionCount { expected: usize, got: usize },
    #[error("arrow `{arrow}` needs a {rows}x{cols} matrix")]
    ActionShape { arrow: String, rows: usize, cols: usize },
    #[error("relation `{0}` does not act as zero")]
    RelationNotAnnihilated(String),
    #[error("the radical does not act nilpotently")]
    NotNilpotent,
    #[error("modules live over different presentations or fields")]
    Mismatch,
}

/// Where a module came from; kept for reporting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Provenance {
    String(StringWord),
    Simple(usize),
    Raw(String),
}

#[derive(Debug, Clone)]
pub struct FinModule {
    presentation: Arc<Presentation>,
    field: PrimeField,
    dims: Vec<usize>,
    action: Vec<Matrix>,
    provenance: Provenance,
    /// For string modules: `(vertex, local index)` of each `z_i`.
    walk: Option<Vec<(usize, usize)>>,
}

impl FinModule {
    /// Builds a module from explicit data and checks every invariant.
    pub fn new(
        presentation: Arc<Presentation>,
        field: PrimeField,
        dims: Vec<usize>,
        action: Vec<Matrix>,
        provenance: Provenance,
    ) -> Result<Self, ModuleError> {
        let m = Self { presentation, field, dims, action, provenance, walk: None };
        m.check()?;
        Ok(m)
    }

    pub fn zero(presentation: Arc<Presentation>, field: PrimeField) -> Self {
        let dims = vec![0; presentation.quiver().num_vertices()];
        let action = vec![Matrix::zeros(field, 0, 0); presentation.quiver().num_arrows()];
        Self { presentation, field, dims, action, provenance: Provenance::Raw("0".into()), walk: None }
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_at(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn action(&self, arrow: usize) -> &Matrix {
        &self.action[arrow]
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.action
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn walk(&self) -> Option<&[(usize, usize)]> {
        self.walk.as_deref()
    }

    pub fn word(&self) -> Option<&StringWord> {
        match &self.provenance {
            Provenance::String(w) => Some(w),
            _ => None,
        }
    }

    pub fn same_setting(&self, other: &FinModule) -> bool {
        self.field == other.field
            && (Arc::ptr_eq(&self.presentation, &other.presentation) || *self.presentation == *other.presentation)
    }

    pub fn label(&self) -> String {
        match &self.provenance {
            Provenance::String(w) => w.render(&self.presentation),
            Provenance::Simple(v) => format!("simple {}", self.presentation.quiver().vertex_name(*v)),
            Provenance::Raw(s) => s.clone(),
        }
    }

    pub fn check(&self) -> Result<(), ModuleError> {
        let q = self.presentation.quiver();
        if self.dims.len() != q.num_vertices() {
            return Err(ModuleError::DimensionCount { expected: q.num_vertices(), got: self.dims.len() });
        }
        if self.action.len() != q.num_arrows() {
            return Err(ModuleError::DimensionCount { expected: q.num_arrows(), got: self.action.len() });
        }
        for (i, a) in q.arrows().iter().enumerate() {
            let (rows, cols) = (self.dims[a.target], self.dims[a.source]);
            if self.action[i].shape() != (rows, cols) || self.action[i].field() != self.field {
                return Err(ModuleError::ActionShape { arrow: a.name.clone(), rows, cols });
            }
        }
        for rel in self.presentation.relations() {
            if !self.path_action(&rel.arrows).is_zero() {
                return Err(ModuleError::RelationNotAnnihilated(rel.render(q)));
            }
        }
        if !self.is_radical_nilpotent() {
            return Err(ModuleError::NotNilpotent);
        }
        Ok(())
    }

    /// Action of a path given in application order.
    pub fn path_action(&self, arrows: &[usize]) -> Matrix {
        let q = self.presentation.quiver();
        let start = q.arrow(arrows[0]).source;
        let mut m = Matrix::identity(self.field, self.dims[start]);
        for &a in arrows {
            m = self.action[a].mul(&m);
        }
        m
    }

    /// Offset of each vertex block in the total space.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.dims
            .iter()
            .map(|d| {
                let o = acc;
                acc += d;
                o
            })
            .collect()
    }

    /// The action of one arrow as an endomorphism of the total space.
    pub fn global_action(&self, arrow: usize) -> Matrix {
        let q = self.presentation.quiver();
        let off = self.offsets();
        let a = q.arrow(arrow);
        let n = self.total_dim();
        let mut g = Matrix::zeros(self.field, n, n);
        g.paste(off[a.target], off[a.source], &self.action[arrow]);
        g
    }

    /// Sum of all arrow actions on the total space.
    pub fn radical_matrix(&self) -> Matrix {
        let n = self.total_dim();
        (0..self.action.len()).fold(Matrix::zeros(self.field, n, n), |acc, a| acc.add(&self.global_action(a)))
    }

    pub fn is_radical_nilpotent(&self) -> bool {
        let n = self.total_dim();
        n == 0 || self.radical_matrix().pow(n as u32).is_zero()
    }

    pub fn direct_sum(&self, other: &FinModule) -> Result<FinModule, ModuleError> {
        if !self.same_setting(other) {
            return Err(ModuleError::Mismatch);
        }
        let q = self.presentation.quiver();
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let action = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let mut m = Matrix::zeros(self.field, dims[a.target], dims[a.source]);
                m.paste(0, 0, &self.action[i]);
                m.paste(self.dims[a.target], self.dims[a.source], &other.action[i]);
                m
            })
            .collect();
        let label = format!("{} + {}", self.label(), other.label());
        FinModule::new(self.presentation.clone(), self.field, dims, action, Provenance::Raw(label))
    }
}

pub fn simple_module(p: &Arc<Presentation>, v: usize, field: PrimeField) -> FinModule {
    let q = p.quiver();
    let mut dims = vec![0; q.num_vertices()];
    dims[v] = 1;
    let action = q.arrows().iter().map(|a| Matrix::zeros(field, dims[a.target], dims[a.source])).collect();
    FinModule {
        presentation: p.clone(),
        field,
        dims,
        action,
        provenance: Provenance::Simple(v),
        walk: Some(vec![(v, 0)]),
    }
}

/// The string module `M[w]`: basis `z_0 .. z_n` along the walk.
pub fn string_module(p: &Arc<Presentation>, w: &StringWord, field: PrimeField) -> Result<FinModule, ModuleError> {
    p.require_gentle().map_err(WordError::from)?;
    w.validate(p)?;
    let q = p.quiver();
    let mut dims = vec![0; q.num_vertices()];
    let walk: Vec<(usize, usize)> = w
        .vertices(p)
        .into_iter()
        .map(|v| {
            dims[v] += 1;
            (v, dims[v] - 1)
        })
        .collect();
    let mut action: Vec<Matrix> =
        q.arrows().iter().map(|a| Matrix::zeros(field, dims[a.target], dims[a.source])).collect();
    for (i, l) in w.letters.iter().enumerate() {
        // letter i + 1 joins z_i and z_{i+1}
        let (from, to) = if l.inverse { (walk[i + 1], walk[i]) } else { (walk[i], walk[i + 1]) };
        action[l.arrow].set(to.1, from.1, 1);
    }
    let provenance = if w.is_simple() { Provenance::Simple(w.base) } else { Provenance::String(w.clone()) };
    let m = FinModule { presentation: p.clone(), field, dims, action, provenance, walk: Some(walk) };
    m.check()?;
    Ok(m)
}

/// Position of `z_i` in the total space of a string module.
pub fn walk_positions(m: &FinModule) -> Option<Vec<usize>> {
    let off = m.offsets();
    m.walk().map(|w| w.iter().map(|&(v, i)| off[v] + i).collect())
}
