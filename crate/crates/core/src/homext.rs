//! Hom and Ext^1 between finite-dimensional modules.
//!
//! Hom is the solution space of `N(a) g_s = g_t M(a)` over all arrows.
//! Ext^1 uses cocycles `f_a : M_s -> N_t` with `N(b) f_a + f_b M(a) = 0`
//! for each relation `b*a`, modulo coboundaries
//! `f_a = N(a) g_s - g_t M(a)`.

use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

use crate::linalg::{Constraint, LinalgError, LinearSystem, Matrix, PrimeField, Subspace};
use crate::module::{string_module, FinModule, ModuleError, Provenance};
use crate::presentation::Presentation;
use crate::strings::{enumerate_strings, StringWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomExtError {
    #[error("modules live over different presentations or fields")]
    Mismatch,
    #[error("enumeration needs {needed} steps, over the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("class count {count} is not a power of {q}")]
    NotAPower { count: u128, q: u32 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// A basis of `Hom(M, N)`, each element one matrix per vertex.
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub dimension: usize,
    pub basis: Vec<Vec<Matrix>>,
}

#[derive(Debug, Clone)]
pub struct ExtSpace {
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    pub dimension: usize,
    /// Basis of `Z^1`, each element one matrix per arrow.
    pub cocycles: Vec<Vec<Matrix>>,
    /// Cocycles whose classes form a basis of `Ext^1`.
    pub classes: Vec<Vec<Matrix>>,
}

fn check_pair(m: &FinModule, n: &FinModule) -> Result<(), HomExtError> {
    if m.same_setting(n) {
        Ok(())
    } else {
        Err(HomExtError::Mismatch)
    }
}

fn hom_system(m: &FinModule, n: &FinModule) -> LinearSystem {
    let q = m.presentation().quiver();
    let mut sys = LinearSystem::new(m.field());
    for v in 0..q.num_vertices() {
        sys.add_unknown(format!("g{}", q.vertex_name(v)), n.dim_at(v), m.dim_at(v));
    }
    let f = m.field();
    for (i, a) in q.arrows().iter().enumerate() {
        let nt = n.dim_at(a.target);
        let ms = m.dim_at(a.source);
        sys.add_constraint(Constraint::new(nt, ms).term(n.action(i).clone(), a.source, Matrix::identity(f, ms)).term(
            Matrix::identity(f, nt).neg(),
            a.target,
            m.action(i).clone(),
        ));
    }
    sys
}

pub fn hom_space(m: &FinModule, n: &FinModule) -> Result<HomSpace, HomExtError> {
    check_pair(m, n)?;
    let sys = hom_system(m, n);
    let sol = sys.solve()?;
    let basis = sol.basis.iter().map(|v| sys.unflatten(v)).collect();
    Ok(HomSpace { dimension: sol.dimension, basis })
}

pub fn hom_dim(m: &FinModule, n: &FinModule) -> Result<usize, HomExtError> {
    check_pair(m, n)?;
    Ok(hom_system(m, n).solve_dim()?)
}

pub fn end_is_trivial(v: &FinModule) -> bool {
    hom_dim(v, v).map(|d| d == 1).unwrap_or(false)
}

/// `sum_v dim Hom_k(M_v, N_v)`.
pub fn vertex_map_dim(m: &FinModule, n: &FinModule) -> usize {
    m.dims().iter().zip(n.dims()).map(|(a, b)| a * b).sum()
}

pub(crate) fn cocycle_system(m: &FinModule, n: &FinModule) -> LinearSystem {
    let p = m.presentation();
    let q = p.quiver();
    let f = m.field();
    let mut sys = LinearSystem::new(f);
    for a in q.arrows() {
        sys.add_unknown(format!("f{}", a.name), n.dim_at(a.target), m.dim_at(a.source));
    }
    for (outer, inner) in p.relation_pairs() {
        let u = q.arrow(inner).source;
        let w = q.arrow(outer).target;
        let (mu, nw) = (m.dim_at(u), n.dim_at(w));
        sys.add_constraint(Constraint::new(nw, mu).term(n.action(outer).clone(), inner, Matrix::identity(f, mu)).term(
            Matrix::identity(f, nw),
            outer,
            m.action(inner).clone(),
        ));
    }
    sys
}

/// The coboundary of a vertex map `g`.
pub fn coboundary(m: &FinModule, n: &FinModule, g: &[Matrix]) -> Vec<Matrix> {
    let q = m.presentation().quiver();
    q.arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| n.action(i).mul(&g[a.source]).sub(&g[a.target].mul(m.action(i))))
        .collect()
}

pub(crate) fn flatten(ms: &[Matrix]) -> Vec<u32> {
    ms.iter().flat_map(|m| m.data().iter().copied()).collect()
}

/// `B^1` as a subspace of the flattened cocycle coordinates.
pub(crate) fn coboundary_space(m: &FinModule, n: &FinModule) -> Subspace {
    let q = m.presentation().quiver();
    let f = m.field();
    let ambient: usize = q.arrows().iter().map(|a| n.dim_at(a.target) * m.dim_at(a.source)).sum();
    let mut cob = Vec::new();
    for v in 0..q.num_vertices() {
        for r in 0..n.dim_at(v) {
            for c in 0..m.dim_at(v) {
                let mut g: Vec<Matrix> =
                    (0..q.num_vertices()).map(|u| Matrix::zeros(f, n.dim_at(u), m.dim_at(u))).collect();
                g[v].set(r, c, 1);
                cob.push(flatten(&coboundary(m, n, &g)));
            }
        }
    }
    Subspace::spanned_by(f, ambient, &cob)
}

pub fn ext1_space(m: &FinModule, n: &FinModule) -> Result<ExtSpace, HomExtError> {
    check_pair(m, n)?;
    let sys = cocycle_system(m, n);
    let sol = sys.solve()?;
    let z = sol.dimension;
    let b = vertex_map_dim(m, n) - hom_dim(m, n)?;
    let cocycles: Vec<Vec<Matrix>> = sol.basis.iter().map(|v| sys.unflatten(v)).collect();

    let bspace = coboundary_space(m, n);
    debug_assert_eq!(bspace.dim(), b);
    let classes = bspace.complement_from(&sol.basis).iter().map(|v| sys.unflatten(v)).collect::<Vec<_>>();
    Ok(ExtSpace { cocycle_dim: z, coboundary_dim: b, dimension: z - b, cocycles, classes })
}

pub fn ext1_dim(m: &FinModule, n: &FinModule) -> Result<usize, HomExtError> {
    check_pair(m, n)?;
    let z = cocycle_system(m, n).solve_dim()?;
    Ok(z - (vertex_map_dim(m, n) - hom_dim(m, n)?))
}

/// The module on `N + M` with action `[[N(a), f_a], [0, M(a)]]`; `N` is
/// the submodule.
pub fn middle_term(m: &FinModule, n: &FinModule, f: &[Matrix]) -> Result<FinModule, HomExtError> {
    check_pair(m, n)?;
    let q = m.presentation().quiver();
    let dims: Vec<usize> = m.dims().iter().zip(n.dims()).map(|(a, b)| a + b).collect();
    let action = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut e = Matrix::zeros(m.field(), dims[a.target], dims[a.source]);
            e.paste(0, 0, n.action(i));
            e.paste(0, n.dim_at(a.source), &f[i]);
            e.paste(n.dim_at(a.target), n.dim_at(a.source), m.action(i));
            e
        })
        .collect();
    let label = format!("extension of {} by {}", m.label(), n.label());
    Ok(FinModule::new(m.presentation().clone(), m.field(), dims, action, Provenance::Raw(label))?)
}

pub(crate) fn pow_u128(q: u32, e: usize) -> Option<u128> {
    (q as u128).checked_pow(e as u32)
}

/// All vectors of `F_q^len`, in lexicographic order.
pub(crate) fn for_each_vector(q: u32, len: usize, mut visit: impl FnMut(&[u32])) {
    let mut v = vec![0u32; len];
    loop {
        visit(&v);
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            v[i] += 1;
            if v[i] < q {
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

/// Exhaustive Ext^1 oracle.
///
/// Walks every choice of off-diagonal blocks arrow by arrow, keeps the
/// ones whose middle term satisfies the relations, and divides by the set
/// of coboundaries found by running over every vertex map. `budget`
/// bounds both enumerations.
pub fn brute_force_ext(m: &FinModule, n: &FinModule, budget: u128) -> Result<usize, HomExtError> {
    check_pair(m, n)?;
    let p = m.presentation();
    let q = p.quiver();
    let field = m.field();
    let fq = field.order();

    let shapes: Vec<(usize, usize)> = q.arrows().iter().map(|a| (n.dim_at(a.target), m.dim_at(a.source))).collect();
    let nvars: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let gshapes: Vec<(usize, usize)> = (0..q.num_vertices()).map(|v| (n.dim_at(v), m.dim_at(v))).collect();
    let gvars: usize = gshapes.iter().map(|(r, c)| r * c).sum();
    for needed in [pow_u128(fq, nvars), pow_u128(fq, gvars)] {
        match needed {
            Some(x) if x <= budget => {}
            other => return Err(HomExtError::BudgetExceeded { needed: other.unwrap_or(u128::MAX), budget }),
        }
    }

    // Cocycles: depth-first over arrows, checking each relation once both
    // of its blocks are fixed.
    let rels: Vec<(usize, usize)> = p.relation_pairs().collect();
    let mut blocks: Vec<Matrix> = shapes.iter().map(|&(r, c)| Matrix::zeros(field, r, c)).collect();
    let mut cocycles: Vec<Vec<u32>> = Vec::new();
    fn dfs(
        k: usize,
        m: &FinModule,
        n: &FinModule,
        rels: &[(usize, usize)],
        shapes: &[(usize, usize)],
        blocks: &mut Vec<Matrix>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if k == shapes.len() {
            out.push(flatten(blocks));
            return;
        }
        let field = m.field();
        let (r, c) = shapes[k];
        for_each_vector(field.order(), r * c, |v| {
            blocks[k] = Matrix::from_data(field, r, c, v.to_vec());
            let ok = rels.iter().filter(|&&(o, i)| o.max(i) == k).all(|&(o, i)| {
                let e = block_product(m, n, blocks, o, i);
                e.is_zero()
            });
            if ok {
                dfs(k + 1, m, n, rels, shapes, blocks, out);
            }
        });
        blocks[k] = Matrix::zeros(field, r, c);
    }
    dfs(0, m, n, &rels, &shapes, &mut blocks, &mut cocycles);

    let zset: HashSet<Vec<u32>> = cocycles.into_iter().collect();
    let mut bset: HashSet<Vec<u32>> = HashSet::new();
    let mut gmats: Vec<Matrix> = gshapes.iter().map(|&(r, c)| Matrix::zeros(field, r, c)).collect();
    for_each_vector(fq, gvars, |flat| {
        let mut at = 0;
        for (v, &(r, c)) in gshapes.iter().enumerate() {
            gmats[v] = Matrix::from_data(field, r, c, flat[at..at + r * c].to_vec());
            at += r * c;
        }
        bset.insert(flatten(&coboundary(m, n, &gmats)));
    });
    debug_assert!(bset.iter().all(|b| zset.contains(b)));

    let zc = zset.len() as u128;
    let bc = bset.len() as u128;
    if !zc.is_multiple_of(bc) {
        return Err(HomExtError::NotAPower { count: zc, q: fq });
    }
    exact_log(zc / bc, fq).ok_or(HomExtError::NotAPower { count: zc / bc, q: fq })
}

/// `e` with `q^e = count`, if there is one.
pub(crate) fn exact_log(count: u128, q: u32) -> Option<usize> {
    let mut e = 0;
    let mut acc = 1u128;
    while acc < count {
        acc *= q as u128;
        e += 1;
    }
    (acc == count).then_some(e)
}

/// The `(outer, inner)` block of `E(outer) E(inner)` that must vanish,
/// computed on the assembled middle term.
fn block_product(m: &FinModule, n: &FinModule, f: &[Matrix], outer: usize, inner: usize) -> Matrix {
    let q = m.presentation().quiver();
    let (ai, ao) = (q.arrow(inner), q.arrow(outer));
    let e = |arrow: usize, s: usize, t: usize| {
        let mut x = Matrix::zeros(m.field(), n.dim_at(t) + m.dim_at(t), n.dim_at(s) + m.dim_at(s));
        x.paste(0, 0, n.action(arrow));
        x.paste(0, n.dim_at(s), &f[arrow]);
        x.paste(n.dim_at(t), n.dim_at(s), m.action(arrow));
        x
    };
    e(outer, ao.source, ao.target).mul(&e(inner, ai.source, ai.target))
}

/// The strings of length at most `max_len` whose module has `End = k`.
pub fn classify_trivial_end(p: &Arc<Presentation>, max_len: usize, field: PrimeField) -> Vec<StringWord> {
    enumerate_strings(p, max_len)
        .into_iter()
        .filter(|w| string_module(p, w, field).map(|m| end_is_trivial(&m)).unwrap_or(false))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::lambda0;
    use crate::module::simple_module;
    use crate::strings::make_string;

    fn f2() -> PrimeField {
        PrimeField::binary()
    }

    fn sm(p: &Arc<Presentation>, w: &str) -> FinModule {
        string_module(p, &make_string(p, w).unwrap(), f2()).unwrap()
    }

    #[test]
    fn hom_examples() {
        let p = lambda0();
        let s1 = simple_module(&p, 0, f2());
        let s2 = simple_module(&p, 1, f2());
        assert_eq!(hom_dim(&s1, &s2).unwrap(), 0);
        assert_eq!(hom_dim(&sm(&p, "b*c*a"), &sm(&p, "b*c*a")).unwrap(), 1);
        assert_eq!(hom_dim(&sm(&p, "a"), &s1).unwrap(), 1);
    }

    #[test]
    fn end_examples() {
        let p = lambda0();
        assert!(end_is_trivial(&sm(&p, "c")));
        assert!(end_is_trivial(&sm(&p, "c*a")));
        let sum = sm(&p, "c").direct_sum(&sm(&p, "d")).unwrap();
        assert!(!end_is_trivial(&sum));
    }

    #[test]
    fn ext_examples() {
        let p = lambda0();
        let s1 = simple_module(&p, 0, f2());
        let s2 = simple_module(&p, 1, f2());
        assert_eq!(ext1_dim(&s1, &s1).unwrap(), 1);
        assert_eq!(ext1_dim(&sm(&p, "a"), &s1).unwrap(), 0);
        assert_eq!(brute_force_ext(&s1, &s2, 1 << 20).unwrap(), 1);
        assert_eq!(brute_force_ext(&s1, &s1, 1 << 20).unwrap(), 1);
        let zero = FinModule::zero(p.clone(), f2());
        assert_eq!(brute_force_ext(&sm(&p, "c*a"), &zero, 1 << 20).unwrap(), 0);
        assert_eq!(ext1_dim(&sm(&p, "c*a"), &zero).unwrap(), 0);
    }

    #[test]
    fn coboundary_formula_matches_span() {
        let p = lambda0();
        let words = enumerate_strings(&p, 2);
        for w1 in &words {
            for w2 in &words {
                let m = string_module(&p, w1, f2()).unwrap();
                let n = string_module(&p, w2, f2()).unwrap();
                let e = ext1_space(&m, &n).unwrap();
                assert_eq!(e.classes.len(), e.dimension);
                assert_eq!(e.dimension, ext1_dim(&m, &n).unwrap());
                for c in &e.cocycles {
                    middle_term(&m, &n, c).unwrap();
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let p = lambda0();
        let m = sm(&p, "b*c*a");
        assert!(matches!(brute_force_ext(&m, &m, 16), Err(HomExtError::BudgetExceeded { .. })));
    }

    #[test]
    fn mismatch_is_an_error() {
        let p = lambda0();
        let s1 = simple_module(&p, 0, f2());
        let s1q3 = simple_module(&p, 0, PrimeField::new(3).unwrap());
        assert_eq!(hom_dim(&s1, &s1q3).unwrap_err(), HomExtError::Mismatch);
    }

    #[test]
    fn lemma_list_at_length_three() {
        let p = lambda0();
        let got: Vec<String> = classify_trivial_end(&p, 3, f2()).iter().map(|w| w.render(&p)).collect();
        assert_eq!(got.len(), 10, "{got:?}");
    }
}
