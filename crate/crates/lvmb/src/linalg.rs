//! Dense exact-rational vectors and matrices, with the elimination kernels
//! (rank, reduced row echelon, kernel bases, solving, inversion) the rest of
//! the crate is built on.
//!
//! Everything here is deterministic: equal inputs produce bit-identical
//! outputs. Kernel bases in particular are fixed by reduced row echelon form
//! with free variables taken in ascending column order, each free coordinate
//! set to 1.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rat::Rat;

/// A dense vector of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RatVector(Vec<Rat>);

impl RatVector {
    pub fn new(entries: Vec<Rat>) -> Self {
        RatVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        RatVector(vec![Rat::zero(); dim])
    }

    /// Standard basis vector `e_i` (0-based) in the given dimension.
    pub fn standard(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut v = Self::zeros(dim);
        v.0[i] = Rat::one();
        v
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        RatVector(entries.iter().map(|&n| Rat::int(n)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rat::is_zero)
    }

    pub fn add(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.dim(), other.dim());
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.dim(), other.dim());
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> RatVector {
        RatVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &Rat) -> RatVector {
        RatVector(self.0.iter().map(|a| a * c).collect())
    }

    pub fn dot(&self, other: &RatVector) -> Rat {
        assert_eq!(self.dim(), other.dim());
        let mut acc = Rat::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            acc += &(a * b);
        }
        acc
    }
}

impl Index<usize> for RatVector {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl IndexMut<usize> for RatVector {
    fn index_mut(&mut self, i: usize) -> &mut Rat {
        &mut self.0[i]
    }
}

impl fmt::Debug for RatVector {
    fmt_vec_like!();
}

macro_rules! fmt_vec_like {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "(")?;
            for (i, e) in self.0.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, ")")
        }
    };
}
use fmt_vec_like;

/// A dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: &[RatVector]) -> Self {
        assert!(!rows.is_empty(), "matrix needs at least one row");
        let cols = rows[0].dim();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.dim(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        RatMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_cols(cols: &[RatVector]) -> Self {
        assert!(!cols.is_empty(), "matrix needs at least one column");
        let rows = cols[0].dim();
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.dim(), rows, "ragged columns");
            for i in 0..rows {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let vs: Vec<RatVector> = rows.iter().map(|r| RatVector::from_ints(r)).collect();
        Self::from_rows(&vs)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> RatVector {
        assert!(r < self.rows);
        RatVector(self.data[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn col(&self, c: usize) -> RatVector {
        assert!(c < self.cols);
        RatVector((0..self.rows).map(|r| self[(r, c)].clone()).collect())
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &RatVector) -> RatVector {
        assert_eq!(self.cols, v.dim(), "dimension mismatch");
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = Rat::zero();
            for j in 0..self.cols {
                if !self[(i, j)].is_zero() && !v[j].is_zero() {
                    acc += &(&self[(i, j)] * &v[j]);
                }
            }
            out.push(acc);
        }
        RatVector(out)
    }

    pub fn mul_mat(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if other[(k, j)].is_zero() {
                        continue;
                    }
                    let prod = &self[(i, k)] * &other[(k, j)];
                    m[(i, j)] += &prod;
                }
            }
        }
        m
    }

    /// Reduces `self` in place to reduced row echelon form and returns the
    /// pivot columns in ascending order.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let Some(src) = (pivot_row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(pivot_row, src);
            let inv = self[(pivot_row, col)].recip();
            self.scale_row(pivot_row, &inv);
            for r in 0..self.rows {
                if r != pivot_row && !self[(r, col)].is_zero() {
                    let factor = self[(r, col)].clone();
                    self.sub_scaled_row(r, pivot_row, &factor);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: &Rat) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            if !self.data[idx].is_zero() {
                self.data[idx] *= c;
            }
        }
    }

    /// `row[r] -= factor * row[src]`
    fn sub_scaled_row(&mut self, r: usize, src: usize, factor: &Rat) {
        for j in 0..self.cols {
            if !self.data[src * self.cols + j].is_zero() {
                let delta = &self.data[src * self.cols + j] * factor;
                self.data[r * self.cols + j] -= &delta;
            }
        }
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rat {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Rank over the rationals, by exact Gaussian elimination.
pub fn rank(m: &RatMatrix) -> usize {
    let mut work = m.clone();
    work.rref_in_place().len()
}

/// Rank of the span of a set of vectors.
pub fn rank_of(vectors: &[RatVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    rank(&RatMatrix::from_rows(vectors))
}

/// A deterministic basis of `{ v : M v = 0 }`.
///
/// Computed from the reduced row echelon form: one basis vector per free
/// column, taken in ascending column order, with the free coordinate set to 1.
pub fn kernel_basis(m: &RatMatrix) -> Vec<RatVector> {
    let mut work = m.clone();
    let pivots = work.rref_in_place();
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in 0..m.cols {
        if is_pivot[free] {
            continue;
        }
        let mut v = RatVector::zeros(m.cols);
        v[free] = Rat::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -&work[(row, free)];
        }
        basis.push(v);
    }
    basis
}

/// One exact solution of `M x = b` (free variables set to 0), or `None` if the
/// system is inconsistent.
pub fn solve(m: &RatMatrix, b: &RatVector) -> Option<RatVector> {
    assert_eq!(m.rows(), b.dim(), "dimension mismatch");
    let mut aug = RatMatrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, m.cols)] = b[i].clone();
    }
    // Eliminate over the coefficient columns only; the last column rides along.
    let mut pivots = Vec::new();
    let mut pivot_row = 0;
    for col in 0..m.cols {
        if pivot_row == aug.rows {
            break;
        }
        let Some(src) = (pivot_row..aug.rows).find(|&r| !aug[(r, col)].is_zero()) else {
            continue;
        };
        aug.swap_rows(pivot_row, src);
        let inv = aug[(pivot_row, col)].recip();
        aug.scale_row(pivot_row, &inv);
        for r in 0..aug.rows {
            if r != pivot_row && !aug[(r, col)].is_zero() {
                let factor = aug[(r, col)].clone();
                aug.sub_scaled_row(r, pivot_row, &factor);
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    for r in pivot_row..aug.rows {
        if !aug[(r, m.cols)].is_zero() {
            return None;
        }
    }
    let mut x = RatVector::zeros(m.cols);
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = aug[(row, m.cols)].clone();
    }
    Some(x)
}

/// Exact inverse, or `None` if singular.
pub fn invert(m: &RatMatrix) -> Option<RatMatrix> {
    assert_eq!(m.rows(), m.cols(), "inverse of a non-square matrix");
    let n = m.rows();
    let mut aug = RatMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = Rat::one();
    }
    let pivots = aug.rref_in_place();
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    let mut inv = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = aug[(i, n + j)].clone();
        }
    }
    Some(inv)
}

/// An ordered list of linearly independent vectors spanning a subspace of
/// `R^ambient_dim`. Independence is enforced at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: Vec<RatVector>,
}

impl SubspaceBasis {
    pub fn new(ambient_dim: usize, vectors: Vec<RatVector>) -> Result<Self, Error> {
        for v in &vectors {
            if v.dim() != ambient_dim {
                return Err(Error::BadInput(format!(
                    "subspace vector of dimension {} in ambient dimension {}",
                    v.dim(),
                    ambient_dim
                )));
            }
        }
        if rank_of(&vectors) != vectors.len() {
            return Err(Error::BadInput(
                "subspace basis vectors are linearly dependent".into(),
            ));
        }
        Ok(SubspaceBasis {
            ambient_dim,
            vectors,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[RatVector] {
        &self.vectors
    }

    /// Exact membership of `v` in the span.
    pub fn contains(&self, v: &RatVector) -> bool {
        assert_eq!(v.dim(), self.ambient_dim);
        if self.vectors.is_empty() {
            return v.is_zero();
        }
        let m = RatMatrix::from_cols(&self.vectors);
        solve(&m, v).is_some()
    }

    /// Whether two bases span the same subspace.
    pub fn same_span(&self, other: &SubspaceBasis) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.dim() == other.dim()
            && other.vectors.iter().all(|v| self.contains(v))
    }
}

/// The unique affine map `x -> L x + t` with `L src[j] + t = dst[j]` for every
/// `j` in `basis_idx`, provided it also matches the remaining points; `None`
/// when some remaining point disagrees.
///
/// Fails if `basis_idx` does not pick an affinely independent family in `src`.
pub fn solve_affine_map(
    src: &[RatVector],
    dst: &[RatVector],
    basis_idx: &[usize],
) -> Result<Option<(RatMatrix, RatVector)>, Error> {
    if src.is_empty() || src.len() != dst.len() {
        return Err(Error::BadInput(
            "affine map needs equally many source and destination points".into(),
        ));
    }
    let d = src[0].dim();
    if basis_idx.len() != d + 1 {
        return Err(Error::BadInput(format!(
            "affine basis in dimension {d} needs {} points, got {}",
            d + 1,
            basis_idx.len()
        )));
    }
    if basis_idx.iter().any(|&i| i >= src.len()) {
        return Err(Error::BadInput("affine basis index out of range".into()));
    }
    let origin = basis_idx[0];
    let diffs: Vec<RatVector> = basis_idx[1..]
        .iter()
        .map(|&i| src[i].sub(&src[origin]))
        .collect();
    if rank_of(&diffs) != d {
        return Err(Error::BadInput(
            "affine basis points are affinely dependent".into(),
        ));
    }
    let s = RatMatrix::from_cols(&diffs);
    let dst_diffs: Vec<RatVector> = basis_idx[1..]
        .iter()
        .map(|&i| dst[i].sub(&dst[origin]))
        .collect();
    let dmat = RatMatrix::from_cols(&dst_diffs);
    let s_inv = invert(&s).expect("columns independent by the rank check");
    let linear = dmat.mul_mat(&s_inv);
    let translation = dst[origin].sub(&linear.mul_vec(&src[origin]));
    for (p, q) in src.iter().zip(dst) {
        if linear.mul_vec(p).add(&translation) != *q {
            return Ok(None);
        }
    }
    Ok(Some((linear, translation)))
}

/// Completes a subspace basis to a basis of the ambient space with standard
/// basis vectors and returns the induced projection.
///
/// The returned indices are the lexicographically first subset of standard
/// basis indices (0-based) that completes `e` to a basis; the matrix is the
/// `(n - dim e) x n` projection onto that complement along the subspace,
/// written in the complement's coordinates.
pub fn complement_and_projection(e: &SubspaceBasis) -> Result<(Vec<usize>, RatMatrix), Error> {
    let n = e.ambient_dim();
    let k = e.dim();
    if k == n {
        return Err(Error::Precondition(
            "subspace already fills the ambient space; no complement to project onto".into(),
        ));
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(n - k);
    let mut current: Vec<RatVector> = e.vectors().to_vec();
    for i in 0..n {
        if current.len() == n {
            break;
        }
        let candidate = RatVector::standard(n, i);
        let mut trial = current.clone();
        trial.push(candidate.clone());
        if rank_of(&trial) == trial.len() {
            chosen.push(i);
            current = trial;
        }
    }
    debug_assert_eq!(current.len(), n, "standard vectors always complete a basis");
    let p = RatMatrix::from_cols(&current);
    let p_inv = invert(&p).expect("completed family is a basis");
    let mut pi = RatMatrix::zeros(n - k, n);
    for r in 0..(n - k) {
        for c in 0..n {
            pi[(r, c)] = p_inv[(k + r, c)].clone();
        }
    }
    Ok((chosen, pi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec_i(entries: &[i64]) -> RatVector {
        RatVector::from_ints(entries)
    }

    #[test]
    fn rank_of_identity_is_full() {
        assert_eq!(rank(&RatMatrix::identity(3)), 3);
    }

    #[test]
    fn rank_of_two_independent_rows() {
        let m = RatMatrix::from_int_rows(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn rank_of_zero_matrix_is_zero() {
        assert_eq!(rank(&RatMatrix::zeros(2, 2)), 0);
    }

    #[test]
    fn kernel_of_identity_is_trivial() {
        assert!(kernel_basis(&RatMatrix::identity(2)).is_empty());
    }

    #[test]
    fn kernel_of_rank_two_map() {
        let m = RatMatrix::from_int_rows(&[&[1, 0, 1], &[0, 1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k, vec![vec_i(&[-1, -1, 1])]);
    }

    #[test]
    fn kernel_of_zero_map_is_everything() {
        let m = RatMatrix::zeros(1, 3);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 3);
        assert_eq!(k[0], vec_i(&[1, 0, 0]));
        assert_eq!(k[2], vec_i(&[0, 0, 1]));
    }

    #[test]
    fn kernel_vectors_are_independent_and_annihilated() {
        let m = RatMatrix::from_int_rows(&[&[2, 4, 6, 1], &[1, 2, 3, 0], &[0, 0, 0, 5]]);
        let k = kernel_basis(&m);
        assert_eq!(rank(&m) + k.len(), m.cols());
        for v in &k {
            assert!(m.mul_vec(v).is_zero());
        }
        assert_eq!(rank_of(&k), k.len());
    }

    #[test]
    fn affine_map_identity_case() {
        let pts = vec![vec_i(&[0, 0]), vec_i(&[1, 0]), vec_i(&[0, 1])];
        let (l, t) = solve_affine_map(&pts, &pts, &[0, 1, 2]).unwrap().unwrap();
        assert_eq!(l, RatMatrix::identity(2));
        assert!(t.is_zero());
    }

    #[test]
    fn affine_map_scaling_and_translation() {
        let src = vec![vec_i(&[0, 0]), vec_i(&[1, 0]), vec_i(&[0, 1])];
        let dst: Vec<RatVector> = src
            .iter()
            .map(|p| p.scale(&Rat::int(2)).add(&vec_i(&[3, 5])))
            .collect();
        let (l, t) = solve_affine_map(&src, &dst, &[0, 1, 2]).unwrap().unwrap();
        assert_eq!(l, RatMatrix::from_int_rows(&[&[2, 0], &[0, 2]]));
        assert_eq!(t, vec_i(&[3, 5]));
    }

    #[test]
    fn affine_map_detects_mismatch_outside_basis() {
        let src = vec![vec_i(&[0, 0]), vec_i(&[1, 0]), vec_i(&[0, 1]), vec_i(&[1, 1])];
        let dst = vec![vec_i(&[0, 0]), vec_i(&[1, 0]), vec_i(&[0, 1]), vec_i(&[1, 2])];
        assert!(solve_affine_map(&src, &dst, &[0, 1, 2]).unwrap().is_none());
    }

    #[test]
    fn affine_map_rejects_dependent_basis() {
        let src = vec![vec_i(&[0, 0]), vec_i(&[1, 1]), vec_i(&[2, 2])];
        assert!(solve_affine_map(&src, &src, &[0, 1, 2]).is_err());
    }

    #[test]
    fn complement_of_plane_in_three_space() {
        let e = SubspaceBasis::new(3, vec![vec_i(&[1, 0, 1]), vec_i(&[0, 1, 1])]).unwrap();
        let (idx, pi) = complement_and_projection(&e).unwrap();
        assert_eq!(idx, vec![0]);
        assert_eq!(pi.mul_vec(&vec_i(&[0, 1, 0])), vec_i(&[1]));
        assert_eq!(pi.mul_vec(&vec_i(&[0, 0, 1])), vec_i(&[-1]));
        // The span of e is exactly the kernel of pi.
        for v in e.vectors() {
            assert!(pi.mul_vec(v).is_zero());
        }
        // Restricted to the chosen complement coordinates, pi is the identity.
        assert_eq!(pi.mul_vec(&vec_i(&[1, 0, 0])), vec_i(&[1]));
    }

    #[test]
    fn complement_of_axis_in_plane() {
        let e = SubspaceBasis::new(2, vec![vec_i(&[1, 0])]).unwrap();
        let (idx, pi) = complement_and_projection(&e).unwrap();
        assert_eq!(idx, vec![1]);
        assert_eq!(pi, RatMatrix::from_int_rows(&[&[0, 1]]));
    }

    #[test]
    fn complement_of_full_space_is_an_error() {
        let e = SubspaceBasis::new(2, vec![vec_i(&[1, 0]), vec_i(&[0, 1])]).unwrap();
        assert!(complement_and_projection(&e).is_err());
    }

    #[test]
    fn subspace_rejects_dependent_vectors() {
        assert!(SubspaceBasis::new(2, vec![vec_i(&[1, 1]), vec_i(&[2, 2])]).is_err());
    }

    #[test]
    fn solve_finds_particular_solution() {
        let m = RatMatrix::from_int_rows(&[&[1, 0, 1], &[0, 1, 1]]);
        let b = vec_i(&[3, 5]);
        let x = solve(&m, &b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        assert!(solve(&RatMatrix::from_int_rows(&[&[1, 1], &[1, 1]]), &vec_i(&[0, 1])).is_none());
    }
}
