//! Lifts and deformations over the test rings `F_q[t]/(t^n)`.
//!
//! A lift of `V` over `R = F_q[t]/(t^n)` is a tuple of `R`-matrices
//! `A(a) = A_0(a) + A_1(a) t + ...` with `A_0 = V` that kills every
//! relation. Two lifts are isomorphic when they are conjugate by vertex
//! maps `g = I + t G_1 + ...`; with `End(V) = k` every isomorphism reduces
//! to a scalar mod `t`, and scalars act trivially, so nothing is lost by
//! normalizing to `I` mod `t`.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::homext::{
    coboundary_space, cocycle_system, end_is_trivial, exact_log, flatten, for_each_vector, pow_u128, HomExtError,
};
use crate::linalg::{LinalgError, Matrix, PrimeField, Subspace};
use crate::module::FinModule;
use crate::udr::UdrKind;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiftError {
    #[error("enumeration needs {needed} steps, over the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("End(V) is larger than k; deformations are not counted by this oracle")]
    EndNotTrivial,
    #[error("deformation count {count} is not a power of {q}")]
    NotAPower { count: u128, q: u32 },
    #[error("an undetermined ring has no morphism count")]
    Undetermined,
    #[error("ring F_{ring} does not match module field F_{module}")]
    FieldMismatch { ring: u32, module: u32 },
    #[error("n must be at least 1")]
    BadLength,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    HomExt(#[from] HomExtError),
}

/// `F_q[t]/(t^n)`; `n = 1` is the residue field itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CoeffRing {
    pub field: PrimeField,
    pub n: usize,
}

impl CoeffRing {
    pub fn new(field: PrimeField, n: usize) -> Result<Self, LiftError> {
        if n == 0 {
            return Err(LiftError::BadLength);
        }
        Ok(Self { field, n })
    }

    /// The dual numbers `F_q[e]`.
    pub fn dual_numbers(field: PrimeField) -> Self {
        Self { field, n: 2 }
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    /// Product of two truncated polynomials.
    pub fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut out = vec![0; self.n];
        for (i, &x) in a.iter().enumerate().take(self.n) {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate().take(self.n - i) {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        out
    }
}

/// A matrix over `F_q[t]/(t^n)`, stored by `t`-coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RMatrix {
    pub coeffs: Vec<Matrix>,
}

impl RMatrix {
    pub fn constant(m: &Matrix, n: usize) -> Self {
        let mut coeffs = vec![Matrix::zeros(m.field(), m.rows(), m.cols()); n];
        coeffs[0] = m.clone();
        Self { coeffs }
    }

    pub fn identity(field: PrimeField, d: usize, n: usize) -> Self {
        Self::constant(&Matrix::identity(field, d), n)
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn mul(&self, other: &RMatrix) -> RMatrix {
        let n = self.n();
        let (r, c) = (self.coeffs[0].rows(), other.coeffs[0].cols());
        let f = self.coeffs[0].field();
        let mut coeffs = vec![Matrix::zeros(f, r, c); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if !other.coeffs[j].is_zero() {
                    coeffs[i + j] = coeffs[i + j].add(&self.coeffs[i].mul(&other.coeffs[j]));
                }
            }
        }
        RMatrix { coeffs }
    }

    pub fn sub(&self, other: &RMatrix) -> RMatrix {
        RMatrix { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Matrix::is_zero)
    }

    /// Inverse of a matrix that is the identity mod `t`.
    pub fn unipotent_inverse(&self) -> RMatrix {
        let n = self.n();
        let d = self.coeffs[0].rows();
        let f = self.coeffs[0].field();
        let id = RMatrix::identity(f, d, n);
        let nil = self.sub(&id);
        // (I + N)^(-1) = I - N + N^2 - ...
        let mut term = id.clone();
        let mut acc = id;
        for j in 1..n {
            term = term.mul(&nil);
            acc = if j % 2 == 1 {
                acc.sub(&term)
            } else {
                RMatrix { coeffs: acc.coeffs.iter().zip(&term.coeffs).map(|(a, b)| a.add(b)).collect() }
            };
        }
        acc
    }

    pub fn truncate(&self, n: usize) -> RMatrix {
        RMatrix { coeffs: self.coeffs[..n].to_vec() }
    }
}

/// One lift: per arrow an `R`-matrix whose constant term is `V`'s action.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lift {
    pub ring: CoeffRing,
    pub action: Vec<RMatrix>,
}

impl Lift {
    pub fn trivial(v: &FinModule, ring: CoeffRing) -> Self {
        Self { ring, action: v.actions().iter().map(|m| RMatrix::constant(m, ring.n)).collect() }
    }

    /// Relations vanish over the ring and the reduction mod `t` is `V`.
    pub fn is_valid_for(&self, v: &FinModule) -> bool {
        let p = v.presentation();
        self.action.iter().zip(v.actions()).all(|(a, m)| a.coeffs[0] == *m)
            && p.relation_pairs().all(|(o, i)| self.action[o].mul(&self.action[i]).is_zero())
    }

    /// Pushforward along `F_q[t]/(t^n) -> F_q[t]/(t^m)`.
    pub fn reduce(&self, m: usize) -> Lift {
        Lift {
            ring: CoeffRing { field: self.ring.field, n: m },
            action: self.action.iter().map(|a| a.truncate(m)).collect(),
        }
    }

    /// `g_t A(a) g_s^{-1}` for vertex maps `g`.
    pub fn conjugate(&self, v: &FinModule, g: &[RMatrix], g_inv: &[RMatrix]) -> Lift {
        let q = v.presentation().quiver();
        let action = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| g[a.target].mul(&self.action[i]).mul(&g_inv[a.source]))
            .collect();
        Lift { ring: self.ring, action }
    }

    fn key(&self) -> Vec<u32> {
        self.action.iter().flat_map(|a| a.coeffs[1..].iter().flat_map(|m| m.data().iter().copied())).collect()
    }
}

fn check_field(v: &FinModule, ring: CoeffRing) -> Result<(), LiftError> {
    if v.field() != ring.field {
        return Err(LiftError::FieldMismatch { ring: ring.q(), module: v.field().order() });
    }
    Ok(())
}

/// Per-level linear data shared by the level solvers.
struct LevelData {
    equations: Matrix,
    shapes: Vec<(usize, usize)>,
    cocycles: Vec<Vec<u32>>,
    coboundaries: Subspace,
    classes: Vec<Vec<u32>>,
}

impl LevelData {
    fn new(v: &FinModule) -> Result<Self, LiftError> {
        let sys = cocycle_system(v, v);
        let (equations, _) = sys.flatten()?;
        let cocycles = equations.nullspace_basis();
        let coboundaries = coboundary_space(v, v);
        let classes = coboundaries.complement_from(&cocycles);
        let shapes = sys.unknowns().iter().map(|u| (u.rows, u.cols)).collect();
        Ok(Self { equations, shapes, cocycles, coboundaries, classes })
    }

    fn split(&self, field: PrimeField, x: &[u32]) -> Vec<Matrix> {
        let mut at = 0;
        self.shapes
            .iter()
            .map(|&(r, c)| {
                let m = Matrix::from_data(field, r, c, x[at..at + r * c].to_vec());
                at += r * c;
                m
            })
            .collect()
    }

    /// Right-hand side of the level-`k` equations given levels `< k`.
    fn rhs(&self, v: &FinModule, levels: &[Vec<Matrix>], k: usize) -> Vec<u32> {
        let p = v.presentation();
        let q = p.quiver();
        let f = v.field();
        let mut b = Vec::new();
        for (o, i) in p.relation_pairs() {
            let rows = v.dim_at(q.arrow(o).target);
            let cols = v.dim_at(q.arrow(i).source);
            let mut acc = Matrix::zeros(f, rows, cols);
            for j in 1..k {
                acc = acc.add(&levels[j][o].mul(&levels[k - j][i]));
            }
            b.extend(acc.neg().data().iter().copied());
        }
        b
    }
}

fn combination(f: PrimeField, base: &[u32], vecs: &[Vec<u32>], coeffs: &[u32]) -> Vec<u32> {
    let mut out = base.to_vec();
    for (v, &c) in vecs.iter().zip(coeffs) {
        if c != 0 {
            for (o, &x) in out.iter_mut().zip(v) {
                *o = f.add(*o, f.mul(c, x));
            }
        }
    }
    out
}

fn lift_from_levels(v: &FinModule, ring: CoeffRing, levels: &[Vec<Matrix>]) -> Lift {
    let action =
        (0..v.actions().len()).map(|a| RMatrix { coeffs: levels.iter().map(|l| l[a].clone()).collect() }).collect();
    Lift { ring, action }
}

/// Every lift of `V` over `ring`, solving one level at a time.
pub fn enumerate_lifts(v: &FinModule, ring: CoeffRing, budget: u128) -> Result<Vec<Lift>, LiftError> {
    check_field(v, ring)?;
    let data = LevelData::new(v)?;
    let f = v.field();
    let per_level = pow_u128(f.order(), data.cocycles.len()).unwrap_or(u128::MAX);
    let needed = per_level.checked_pow((ring.n - 1) as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(LiftError::BudgetExceeded { needed, budget });
    }
    let mut out = Vec::new();
    let mut levels = vec![v.actions().to_vec()];
    fn go(v: &FinModule, ring: CoeffRing, data: &LevelData, levels: &mut Vec<Vec<Matrix>>, out: &mut Vec<Lift>) {
        let k = levels.len();
        if k == ring.n {
            out.push(lift_from_levels(v, ring, levels));
            return;
        }
        let f = v.field();
        let Some(part) = data.equations.solve(&data.rhs(v, levels, k)) else { return };
        for_each_vector(f.order(), data.cocycles.len(), |c| {
            let x = combination(f, &part, &data.cocycles, c);
            levels.push(data.split(f, &x));
            go(v, ring, data, levels, out);
            levels.pop();
        });
    }
    go(v, ring, &data, &mut levels, &mut out);
    Ok(out)
}

/// Every lift over `ring` found by trying all perturbation entries, arrow
/// by arrow, and multiplying out the relations over the ring.
pub fn enumerate_lifts_exhaustive(v: &FinModule, ring: CoeffRing, budget: u128) -> Result<Vec<Lift>, LiftError> {
    check_field(v, ring)?;
    let p = v.presentation();
    let q = p.quiver();
    let f = v.field();
    let shapes: Vec<(usize, usize)> = q.arrows().iter().map(|a| (v.dim_at(a.target), v.dim_at(a.source))).collect();
    let entries: usize = shapes.iter().map(|(r, c)| r * c).sum::<usize>() * (ring.n - 1);
    let needed = pow_u128(f.order(), entries).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(LiftError::BudgetExceeded { needed, budget });
    }
    let rels: Vec<(usize, usize)> = p.relation_pairs().collect();
    let mut action: Vec<RMatrix> = v.actions().iter().map(|m| RMatrix::constant(m, ring.n)).collect();
    let mut out = Vec::new();
    fn go(
        k: usize,
        ring: CoeffRing,
        shapes: &[(usize, usize)],
        rels: &[(usize, usize)],
        action: &mut Vec<RMatrix>,
        out: &mut Vec<Lift>,
    ) {
        if k == shapes.len() {
            out.push(Lift { ring, action: action.clone() });
            return;
        }
        let f = ring.field;
        let (r, c) = shapes[k];
        let base = action[k].coeffs[0].clone();
        for_each_vector(f.order(), r * c * (ring.n - 1), |x| {
            let mut coeffs = vec![base.clone()];
            for j in 0..ring.n - 1 {
                coeffs.push(Matrix::from_data(f, r, c, x[j * r * c..(j + 1) * r * c].to_vec()));
            }
            action[k] = RMatrix { coeffs };
            let ok = rels.iter().filter(|&&(o, i)| o.max(i) == k).all(|&(o, i)| action[o].mul(&action[i]).is_zero());
            if ok {
                go(k + 1, ring, shapes, rels, action, out);
            }
        });
        action[k] = RMatrix::constant(&base, ring.n);
    }
    go(0, ring, &shapes, &rels, &mut action, &mut out);
    Ok(out)
}

/// Deformation counts for every `n` up to some bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeformationTree {
    /// `counts[j]` deformations over `F_q[t]/(t^(j+1))`.
    pub counts: Vec<u128>,
    /// `extendable[j]`: how many of those lift one level further.
    pub extendable: Vec<u128>,
}

/// Counts deformations over `F_q[t]/(t^n)` for `n = 1 ..= n_max`.
///
/// Each level is normalized modulo coboundaries, which is exact because
/// every automorphism of a lift is a scalar when `End(V) = k`.
pub fn deformation_tree(
    v: &FinModule,
    q: PrimeField,
    n_max: usize,
    budget: u128,
) -> Result<DeformationTree, LiftError> {
    check_field(v, CoeffRing { field: q, n: 1 })?;
    if n_max == 0 {
        return Err(LiftError::BadLength);
    }
    if !end_is_trivial(v) {
        return Err(LiftError::EndNotTrivial);
    }
    let data = LevelData::new(v)?;
    let mut tree = DeformationTree { counts: vec![0; n_max], extendable: vec![0; n_max] };
    let mut levels = vec![v.actions().to_vec()];
    let mut visited = 0u128;
    fn go(
        v: &FinModule,
        n_max: usize,
        data: &LevelData,
        levels: &mut Vec<Vec<Matrix>>,
        tree: &mut DeformationTree,
        visited: &mut u128,
        budget: u128,
    ) -> Result<(), LiftError> {
        let k = levels.len();
        *visited += 1;
        if *visited > budget {
            return Err(LiftError::BudgetExceeded { needed: *visited, budget });
        }
        tree.counts[k - 1] += 1;
        if k == n_max {
            return Ok(());
        }
        let f = v.field();
        let Some(part) = data.equations.solve(&data.rhs(v, levels, k)) else { return Ok(()) };
        tree.extendable[k - 1] += 1;
        let mut children = Vec::new();
        for_each_vector(f.order(), data.classes.len(), |c| {
            children.push(data.coboundaries.normal_form(&combination(f, &part, &data.classes, c)));
        });
        for x in children {
            levels.push(data.split(f, &x));
            go(v, n_max, data, levels, tree, visited, budget)?;
            levels.pop();
        }
        Ok(())
    }
    go(v, n_max, &data, &mut levels, &mut tree, &mut visited, budget)?;
    Ok(tree)
}

pub fn count_deformations(v: &FinModule, ring: CoeffRing, budget: u128) -> Result<u128, LiftError> {
    Ok(deformation_tree(v, ring.field, ring.n, budget)?.counts[ring.n - 1])
}

/// Orbit count of all lifts under explicit conjugation by every
/// `g = I + t G_1 + ... + t^(n-1) G_(n-1)`.
pub fn count_deformations_exhaustive(v: &FinModule, ring: CoeffRing, budget: u128) -> Result<u128, LiftError> {
    check_field(v, ring)?;
    if !end_is_trivial(v) {
        return Err(LiftError::EndNotTrivial);
    }
    let f = v.field();
    let lifts = enumerate_lifts_exhaustive(v, ring, budget)?;
    let dims = v.dims();
    let gvars: usize = dims.iter().map(|d| d * d).sum::<usize>() * (ring.n - 1);
    let group = pow_u128(f.order(), gvars).unwrap_or(u128::MAX);
    if group > budget {
        return Err(LiftError::BudgetExceeded { needed: group, budget });
    }
    let mut groups: Vec<(Vec<RMatrix>, Vec<RMatrix>)> = Vec::new();
    for_each_vector(f.order(), gvars, |x| {
        let mut at = 0;
        let g: Vec<RMatrix> = dims
            .iter()
            .map(|&d| {
                let mut coeffs = vec![Matrix::identity(f, d)];
                for _ in 1..ring.n {
                    coeffs.push(Matrix::from_data(f, d, d, x[at..at + d * d].to_vec()));
                    at += d * d;
                }
                RMatrix { coeffs }
            })
            .collect();
        let inv = g.iter().map(RMatrix::unipotent_inverse).collect();
        groups.push((g, inv));
    });
    let mut remaining: HashSet<Vec<u32>> = lifts.iter().map(Lift::key).collect();
    let mut orbits = 0u128;
    for l in &lifts {
        if !remaining.remove(&l.key()) {
            continue;
        }
        orbits += 1;
        for (g, inv) in &groups {
            remaining.remove(&l.conjugate(v, g, inv).key());
        }
    }
    Ok(orbits)
}

/// `log_q` of the number of deformations over the dual numbers, by
/// exhaustive conjugation.
pub fn tangent_dim_via_lifts(v: &FinModule, budget: u128) -> Result<usize, LiftError> {
    let ring = CoeffRing::dual_numbers(v.field());
    let count = count_deformations_exhaustive(v, ring, budget)?;
    exact_log(count, ring.q()).ok_or(LiftError::NotAPower { count, q: ring.q() })
}

/// Local morphisms from the ring `kind` into `ring`, counted by running
/// over every image `x` of `t` in the maximal ideal.
pub fn count_ring_morphisms(kind: &UdrKind, ring: CoeffRing) -> Result<u128, LiftError> {
    match kind {
        UdrKind::Field => Ok(1),
        UdrKind::Undetermined => Err(LiftError::Undetermined),
        UdrKind::PowerSeries | UdrKind::TruncatedPowerSeries(_) => {
            let mut count = 0u128;
            for_each_vector(ring.q(), ring.n - 1, |tail| {
                let ok = match kind {
                    UdrKind::TruncatedPowerSeries(m) => {
                        let mut x = vec![0];
                        x.extend_from_slice(tail);
                        let mut pow = vec![0; ring.n];
                        pow[0] = 1;
                        for _ in 0..*m {
                            pow = ring.mul(&pow, &x);
                        }
                        pow.iter().all(|&c| c == 0)
                    }
                    _ => true,
                };
                if ok {
                    count += 1;
                }
            });
            Ok(count)
        }
    }
}

/// The rings a census is compared against.
pub fn candidate_rings() -> [UdrKind; 3] {
    [UdrKind::Field, UdrKind::TruncatedPowerSeries(2), UdrKind::PowerSeries]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftCensus {
    pub q: u32,
    /// `(n, deformations over F_q[t]/(t^n))`.
    pub census: Vec<(usize, u128)>,
    /// Number of deformations at each `n` that extend to `n + 1`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub extendable: Vec<(usize, u128)>,
    pub matches: Vec<String>,
}

impl LiftCensus {
    pub fn counts(&self) -> Vec<u128> {
        self.census.iter().map(|&(_, c)| c).collect()
    }

    pub fn matches_kind(&self, kind: &UdrKind) -> bool {
        let ring = |n| CoeffRing { field: PrimeField::new(self.q).expect("census field"), n };
        self.census.iter().all(|&(n, c)| count_ring_morphisms(kind, ring(n)) == Ok(c))
    }
}

/// Census for `n = 1 ..= n_max` and the candidate rings it is consistent
/// with at that level.
pub fn fingerprint(v: &FinModule, n_max: usize, budget: u128) -> Result<LiftCensus, LiftError> {
    let tree = deformation_tree(v, v.field(), n_max, budget)?;
    let mut census = LiftCensus {
        q: v.field().order(),
        census: tree.counts.iter().enumerate().map(|(j, &c)| (j + 1, c)).collect(),
        extendable: tree.extendable[..n_max - 1].iter().enumerate().map(|(j, &c)| (j + 1, c)).collect(),
        matches: Vec::new(),
    };
    census.matches = candidate_rings().iter().filter(|k| census.matches_kind(k)).map(UdrKind::ring_name).collect();
    Ok(census)
}

/// A lift's total action flattened, for set membership tests.
pub fn lift_key(l: &Lift) -> Vec<u32> {
    flatten(&l.action.iter().flat_map(|a| a.coeffs.iter().cloned()).collect::<Vec<_>>())
}
