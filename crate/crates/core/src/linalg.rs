//! Exact linear algebra over prime fields.
//!
//! Everything here works with residues stored as `u32` in `0..q`. Matrices
//! are dense and row-major; `0 x n` and `n x 0` shapes are legal and behave
//! as empty linear maps.

use serde::Serialize;
use thiserror::Error;

/// Largest characteristic accepted by [`PrimeField::new`].
pub const MAX_PRIME: u32 = 251;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not a prime in 2..={MAX_PRIME}")]
    NotPrime(u32),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
}

/// The prime field `F_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeField {
    q: u32,
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self, LinalgError> {
        if (2..=MAX_PRIME).contains(&q) && (2..q).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d)) {
            Ok(Self { q })
        } else {
            Err(LinalgError::NotPrime(q))
        }
    }

    /// `F_2`, the default everywhere.
    pub fn binary() -> Self {
        Self { q: 2 }
    }

    pub fn order(self) -> u32 {
        self.q
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.q
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.q - b) % self.q
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.q
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.q - a) % self.q
    }

    pub fn pow(self, mut base: u32, mut exp: u32) -> u32 {
        let mut acc = 1 % self.q;
        base %= self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.q), "inverse of zero in F_{}", self.q);
        self.pow(a, self.q - 2)
    }

    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.q as i64) as u32
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod `q`.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, field.reduce(v));
            }
        }
        m
    }

    /// Wraps an already reduced row-major buffer.
    pub fn from_data(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&x| x < field.order()));
        Self { field, rows, cols, data }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.q;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn count_nonzero(&self) -> usize {
        self.data.iter().filter(|&&x| x != 0).count()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let idx = i * other.cols + j;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape mismatch");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { data, ..*self }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape mismatch");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { data, ..*self }
    }

    pub fn scale(&self, s: u32) -> Matrix {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.mul(a, s % f.q)).collect();
        Matrix { data, ..*self }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(self.field.q - 1)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn pow(&self, e: u32) -> Matrix {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut acc = Matrix::identity(self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c));
            }
        }
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        m.paste(0, 0, self);
        m.paste(0, self.cols, other);
        m
    }

    /// Reduced row echelon form and pivot columns. Pivots are chosen as the
    /// first nonzero entry scanning columns left to right.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c));
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column, in
    /// increasing order of the free column.
    pub fn nullspace_basis(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let (red, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0; self.cols];
                v[free] = 1;
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = f.neg(red.get(row, free));
                }
                v
            })
            .collect()
    }

    /// One solution of `self * x = rhs`, or `None` when inconsistent.
    pub fn solve(&self, rhs: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(rhs.len(), self.rows);
        let aug = self.hstack(&Matrix::from_data(self.field, self.rows, 1, rhs.to_vec()));
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = red.get(row, self.cols);
        }
        Some(x)
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows).map(|r| self.row(r).iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))).collect()
    }
}

/// A subspace of `F_q^n` kept in reduced echelon form, so that every coset
/// has a unique normal form.
#[derive(Debug, Clone)]
pub struct Subspace {
    field: PrimeField,
    ambient: usize,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn spanned_by(field: PrimeField, ambient: usize, vectors: &[Vec<u32>]) -> Self {
        let rows: Vec<u32> = vectors.iter().flat_map(|v| v.iter().copied()).collect();
        let m = Matrix::from_data(field, vectors.len(), ambient, rows);
        let (red, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|r| red.row(r).to_vec()).collect();
        Self { field, ambient, basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    /// Canonical representative of `v + self`: all pivot coordinates zeroed.
    pub fn normal_form(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = out[p];
            if c != 0 {
                for (o, &b) in out.iter_mut().zip(row) {
                    *o = f.sub(*o, f.mul(c, b));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.normal_form(v).iter().all(|&x| x == 0)
    }

    /// Picks vectors from `candidates` that are independent modulo `self`.
    pub fn complement_from(&self, candidates: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let mut grown = self.clone();
        let mut picked = Vec::new();
        for c in candidates {
            if !grown.contains(c) {
                picked.push(c.clone());
                let mut span = grown.basis.clone();
                span.push(c.clone());
                grown = Subspace::spanned_by(self.field, self.ambient, &span);
            }
        }
        picked
    }
}

/// A matrix-shaped unknown in a [`LinearSystem`].
#[derive(Debug, Clone)]
pub struct Unknown {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
}

/// `left * X_unknown * right`.
#[derive(Debug, Clone)]
pub struct Term {
    pub left: Matrix,
    pub unknown: usize,
    pub right: Matrix,
}

/// `sum of terms = rhs`, with `rhs = 0` when absent.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub rows: usize,
    pub cols: usize,
    pub terms: Vec<Term>,
    pub rhs: Option<Matrix>,
}

impl Constraint {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, terms: Vec::new(), rhs: None }
    }

    pub fn term(mut self, left: Matrix, unknown: usize, right: Matrix) -> Self {
        self.terms.push(Term { left, unknown, right });
        self
    }

    pub fn rhs(mut self, rhs: Matrix) -> Self {
        self.rhs = Some(rhs);
        self
    }
}

#[derive(Debug, Clone)]
pub struct LinearSystem {
    field: PrimeField,
    unknowns: Vec<Unknown>,
    constraints: Vec<Constraint>,
}

/// Result of [`LinearSystem::solve`].
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    /// Dimension of the homogeneous solution space.
    pub dimension: usize,
    pub solvable: bool,
    pub particular: Option<Vec<u32>>,
    pub basis: Vec<Vec<u32>>,
}

impl LinearSystem {
    pub fn new(field: PrimeField) -> Self {
        Self { field, unknowns: Vec::new(), constraints: Vec::new() }
    }

    pub fn add_unknown(&mut self, name: impl Into<String>, rows: usize, cols: usize) -> usize {
        self.unknowns.push(Unknown { name: name.into(), rows, cols });
        self.unknowns.len() - 1
    }

    pub fn add_constraint(&mut self, c: Constraint) {
        self.constraints.push(c);
    }

    pub fn unknowns(&self) -> &[Unknown] {
        &self.unknowns
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn num_variables(&self) -> usize {
        self.unknowns.iter().map(|u| u.rows * u.cols).sum()
    }

    fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.unknowns
            .iter()
            .map(|u| {
                let o = acc;
                acc += u.rows * u.cols;
                o
            })
            .collect()
    }

    fn check_shapes(&self) -> Result<(), LinalgError> {
        for (ci, c) in self.constraints.iter().enumerate() {
            for t in &c.terms {
                let u = self
                    .unknowns
                    .get(t.unknown)
                    .ok_or_else(|| LinalgError::Shape(format!("constraint {ci} names unknown #{}", t.unknown)))?;
                for m in [&t.left, &t.right] {
                    if m.field() != self.field {
                        return Err(LinalgError::FieldMismatch(m.field().order(), self.field.order()));
                    }
                }
                if t.left.cols() != u.rows || t.right.rows() != u.cols {
                    return Err(LinalgError::Shape(format!(
                        "constraint {ci}: {}x{} * {}({}x{}) * {}x{}",
                        t.left.rows(),
                        t.left.cols(),
                        u.name,
                        u.rows,
                        u.cols,
                        t.right.rows(),
                        t.right.cols()
                    )));
                }
                if t.left.rows() != c.rows || t.right.cols() != c.cols {
                    return Err(LinalgError::Shape(format!(
                        "constraint {ci}: term of shape {}x{} in a {}x{} equation",
                        t.left.rows(),
                        t.right.cols(),
                        c.rows,
                        c.cols
                    )));
                }
            }
            if let Some(rhs) = &c.rhs {
                if rhs.shape() != (c.rows, c.cols) {
                    return Err(LinalgError::Shape(format!("constraint {ci}: right-hand side shape")));
                }
            }
        }
        Ok(())
    }

    /// Flattens to `A x = b`. Variable order: unknowns in insertion order,
    /// each row-major.
    pub fn flatten(&self) -> Result<(Matrix, Vec<u32>), LinalgError> {
        self.check_shapes()?;
        let f = self.field;
        let offsets = self.offsets();
        let nvars = self.num_variables();
        let neq: usize = self.constraints.iter().map(|c| c.rows * c.cols).sum();
        let mut a = Matrix::zeros(f, neq, nvars);
        let mut b = vec![0; neq];
        let mut eq0 = 0;
        for c in &self.constraints {
            for t in &c.terms {
                let u = &self.unknowns[t.unknown];
                for r in 0..c.rows {
                    for i in 0..u.rows {
                        let l = t.left.get(r, i);
                        if l == 0 {
                            continue;
                        }
                        for j in 0..u.cols {
                            for col in 0..c.cols {
                                let rr = t.right.get(j, col);
                                if rr == 0 {
                                    continue;
                                }
                                let eq = eq0 + r * c.cols + col;
                                let var = offsets[t.unknown] + i * u.cols + j;
                                let v = f.add(a.get(eq, var), f.mul(l, rr));
                                a.set(eq, var, v);
                            }
                        }
                    }
                }
            }
            if let Some(rhs) = &c.rhs {
                b[eq0..eq0 + c.rows * c.cols].copy_from_slice(rhs.data());
            }
            eq0 += c.rows * c.cols;
        }
        Ok((a, b))
    }

    pub fn solve(&self) -> Result<SolveOutcome, LinalgError> {
        let (a, b) = self.flatten()?;
        let basis = a.nullspace_basis();
        let particular = a.solve(&b);
        Ok(SolveOutcome { dimension: basis.len(), solvable: particular.is_some(), particular, basis })
    }

    /// Dimension of the homogeneous solution space.
    pub fn solve_dim(&self) -> Result<usize, LinalgError> {
        Ok(self.solve()?.dimension)
    }

    /// Splits a flat solution vector back into one matrix per unknown.
    pub fn unflatten(&self, v: &[u32]) -> Vec<Matrix> {
        assert_eq!(v.len(), self.num_variables());
        let mut at = 0;
        self.unknowns
            .iter()
            .map(|u| {
                let n = u.rows * u.cols;
                let m = Matrix::from_data(self.field, u.rows, u.cols, v[at..at + n].to_vec());
                at += n;
                m
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> PrimeField {
        PrimeField::binary()
    }

    #[test]
    fn primes_only() {
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(251).is_ok());
        assert_eq!(PrimeField::new(1), Err(LinalgError::NotPrime(1)));
        assert_eq!(PrimeField::new(9), Err(LinalgError::NotPrime(9)));
        assert_eq!(PrimeField::new(257), Err(LinalgError::NotPrime(257)));
    }

    #[test]
    fn field_inverse() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn identity_rank() {
        assert_eq!(Matrix::identity(f2(), 3).rank(), 3);
    }

    #[test]
    fn zero_matrix_rank_and_nullspace() {
        let z = Matrix::zeros(f2(), 2, 5);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.nullspace_basis().len(), 5);
    }

    #[test]
    fn empty_shapes() {
        let a = Matrix::zeros(f2(), 0, 3);
        assert_eq!(a.rank(), 0);
        assert_eq!(a.nullspace_basis().len(), 3);
        let b = Matrix::zeros(f2(), 3, 0);
        assert_eq!(b.rank(), 0);
        assert!(b.nullspace_basis().is_empty());
        assert_eq!(a.mul(&Matrix::zeros(f2(), 3, 2)).shape(), (0, 2));
        assert_eq!(b.mul(&a), Matrix::zeros(f2(), 3, 3));
    }

    #[test]
    fn scalar_zero_constraint_has_one_dim() {
        let mut sys = LinearSystem::new(f2());
        let x = sys.add_unknown("X", 1, 1);
        sys.add_constraint(Constraint::new(1, 1).term(Matrix::zeros(f2(), 1, 1), x, Matrix::identity(f2(), 1)));
        assert_eq!(sys.solve_dim().unwrap(), 1);
    }

    #[test]
    fn nilpotent_anticommutant_is_two_dimensional() {
        for q in [2, 3, 5, 7] {
            let f = PrimeField::new(q).unwrap();
            let n = Matrix::from_rows(f, &[vec![0, 0], vec![1, 0]]);
            let id = Matrix::identity(f, 2);
            let mut sys = LinearSystem::new(f);
            let x = sys.add_unknown("X", 2, 2);
            sys.add_constraint(Constraint::new(2, 2).term(n.clone(), x, id.clone()).term(id, x, n));
            assert_eq!(sys.solve_dim().unwrap(), 2, "q = {q}");
        }
    }

    #[test]
    fn inconsistent_affine_system() {
        let mut sys = LinearSystem::new(f2());
        let x = sys.add_unknown("X", 1, 1);
        sys.add_constraint(
            Constraint::new(1, 1)
                .term(Matrix::zeros(f2(), 1, 1), x, Matrix::identity(f2(), 1))
                .rhs(Matrix::identity(f2(), 1)),
        );
        let out = sys.solve().unwrap();
        assert!(!out.solvable);
        assert!(out.particular.is_none());
    }

    #[test]
    fn affine_solution_satisfies_system() {
        let f = PrimeField::new(5).unwrap();
        let a = Matrix::from_rows(f, &[vec![1, 2, 0], vec![0, 1, 4]]);
        let b = vec![3, 1];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.apply(&x), b);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let mut sys = LinearSystem::new(f2());
        let x = sys.add_unknown("X", 2, 2);
        sys.add_constraint(Constraint::new(2, 2).term(Matrix::identity(f2(), 3), x, Matrix::identity(f2(), 2)));
        assert!(matches!(sys.solve_dim(), Err(LinalgError::Shape(_))));
    }

    #[test]
    fn subspace_normal_form_is_coset_invariant() {
        let f = PrimeField::new(3).unwrap();
        let s = Subspace::spanned_by(f, 3, &[vec![1, 1, 0], vec![2, 2, 0]]);
        assert_eq!(s.dim(), 1);
        let v = vec![0, 2, 1];
        let w = vec![1, 0, 1];
        assert_eq!(s.normal_form(&v), s.normal_form(&w));
        let comp = s.complement_from(&[vec![1, 1, 0], vec![0, 0, 1], vec![0, 0, 2]]);
        assert_eq!(comp, vec![vec![0, 0, 1]]);
    }

    fn arb_matrix() -> impl Strategy<Value = (u32, usize, usize, Vec<u32>)> {
        (prop::sample::select(vec![2u32, 3, 5]), 0usize..=12, 0usize..=12)
            .prop_flat_map(|(q, r, c)| (Just(q), Just(r), Just(c), prop::collection::vec(0..q, r * c)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn rank_nullity((q, r, c, data) in arb_matrix()) {
            let f = PrimeField::new(q).unwrap();
            let m = Matrix::from_data(f, r, c, data);
            let null = m.nullspace_basis();
            prop_assert_eq!(m.rank() + null.len(), c);
            for v in &null {
                prop_assert!(m.apply(v).iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn solve_dim_ignores_constraint_order(
            (q, r, c, data) in arb_matrix(),
            seed in any::<u64>(),
        ) {
            let f = PrimeField::new(q).unwrap();
            let rows: Vec<Matrix> = (0..r)
                .map(|i| Matrix::from_data(f, 1, c, data[i * c..(i + 1) * c].to_vec()))
                .collect();
            let build = |order: &[usize]| {
                let mut sys = LinearSystem::new(f);
                let x = sys.add_unknown("x", c, 1);
                for &i in order {
                    sys.add_constraint(Constraint::new(1, 1).term(rows[i].clone(), x, Matrix::identity(f, 1)));
                }
                sys.solve_dim().unwrap()
            };
            let forward: Vec<usize> = (0..r).collect();
            let mut shuffled = forward.clone();
            let mut s = seed;
            for i in (1..shuffled.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                shuffled.swap(i, (s >> 33) as usize % (i + 1));
            }
            prop_assert_eq!(build(&forward), build(&shuffled));
        }
    }
}
