//! Exact sparse linear algebra over the rationals.
//!
//! Vectors are sparse maps from coordinate index to a nonzero rational.
//! Row reduction is plain exact Gaussian elimination kept in reduced row
//! echelon form, which makes membership tests, coordinates and quotients
//! cheap to read off.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary precision rational, always reduced with positive denominator.
pub type Rational = BigRational;

/// Sparse vector: coordinate index to nonzero entry.
pub type SparseVec = BTreeMap<usize, Rational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("index ({row}, {col}) outside a {rows}x{cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `n` or `n/d`.
pub fn rational_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Adds `c * src` into `dst`, dropping entries that cancel.
pub fn axpy(dst: &mut SparseVec, c: &Rational, src: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (&j, x) in src {
        let e = dst.entry(j).or_insert_with(Rational::zero);
        *e += c * x;
        if e.is_zero() {
            dst.remove(&j);
        }
    }
}

pub fn scale(v: &SparseVec, c: &Rational) -> SparseVec {
    if c.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(&j, x)| (j, x * c)).collect()
}

pub fn unit(i: usize) -> SparseVec {
    let mut v = SparseVec::new();
    v.insert(i, Rational::one());
    v
}

pub fn vec_from_dense(xs: &[Rational]) -> SparseVec {
    xs.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// Sparse matrix stored row by row.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{}", self.rows, self.cols)?;
        for (i, row) in self.data.iter().enumerate() {
            let entries: Vec<String> = row
                .iter()
                .map(|(j, x)| format!("{}:{}", j, rational_string(x)))
                .collect();
            writeln!(f, "  {}: [{}]", i, entries.join(", "))?;
        }
        Ok(())
    }
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![SparseVec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].insert(i, Rational::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        SparseMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().map(|r| vec_from_dense(r)).collect(),
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let dense: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| q(x)).collect())
            .collect();
        Self::from_dense(&dense)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (&i, x) in c {
                if i >= rows {
                    return Err(LinalgError::OutOfBounds {
                        row: i,
                        col: j,
                        rows,
                        cols: columns.len(),
                    });
                }
                m.data[i].insert(j, x.clone());
            }
        }
        Ok(m)
    }

    /// Builds a matrix from sparse rows.
    pub fn from_rows(cols: usize, rows: Vec<SparseVec>) -> Result<Self, LinalgError> {
        for (i, r) in rows.iter().enumerate() {
            if let Some((&j, _)) = r.iter().next_back() {
                if j >= cols {
                    return Err(LinalgError::OutOfBounds {
                        row: i,
                        col: j,
                        rows: rows.len(),
                        cols,
                    });
                }
            }
        }
        let data: Vec<SparseVec> = rows
            .into_iter()
            .map(|r| r.into_iter().filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        Ok(SparseMatrix {
            rows: data.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.data[i].get(&j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rational) -> Result<(), LinalgError> {
        if i >= self.rows || j >= self.cols {
            return Err(LinalgError::OutOfBounds {
                row: i,
                col: j,
                rows: self.rows,
                cols: self.cols,
            });
        }
        if x.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, x);
        }
        Ok(())
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (&j, x) in row {
                t.data[j].insert(i, x.clone());
            }
        }
        t
    }

    pub fn column(&self, j: usize) -> SparseVec {
        let mut c = SparseVec::new();
        for (i, row) in self.data.iter().enumerate() {
            if let Some(x) = row.get(&j) {
                c.insert(i, x.clone());
            }
        }
        c
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        self.transpose().data
    }

    pub fn mul_vec(&self, v: &SparseVec) -> Result<SparseVec, LinalgError> {
        if let Some((&j, _)) = v.iter().next_back() {
            if j >= self.cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: self.cols,
                    found: j + 1,
                });
            }
        }
        let mut out = SparseVec::new();
        for (i, row) in self.data.iter().enumerate() {
            let mut acc = Rational::zero();
            for (j, x) in row {
                if let Some(y) = v.get(j) {
                    acc += x * y;
                }
            }
            if !acc.is_zero() {
                out.insert(i, acc);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (i, row) in self.data.iter().enumerate() {
            let mut acc = SparseVec::new();
            for (&k, x) in row {
                axpy(&mut acc, x, &other.data[k]);
            }
            out.data[i] = acc;
        }
        Ok(out)
    }
}

/// Incremental reduced row echelon form.
///
/// Each stored row has a leading 1 in its pivot column and zeros in every
/// other pivot column.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn from_vectors<'a, I: IntoIterator<Item = &'a SparseVec>>(vs: I) -> Self {
        let mut e = Echelon::new();
        for v in vs {
            e.insert(v);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Rows of the echelon form, in pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.pivots.values()
    }

    /// Residue of `v` modulo the row space, supported on non-pivot columns.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut r = v.clone();
        for (p, x) in v {
            if let Some(row) = self.pivots.get(p) {
                let c = -x.clone();
                axpy(&mut r, &c, row);
            }
        }
        r
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the row space; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let mut r = self.reduce(v);
        let (p, lead) = match r.iter().next() {
            Some((&p, lead)) => (p, lead.clone()),
            None => return false,
        };
        if !lead.is_one() {
            let inv = lead.recip();
            r = scale(&r, &inv);
        }
        for row in self.pivots.values_mut() {
            if let Some(x) = row.get(&p).cloned() {
                axpy(row, &-x, &r);
            }
        }
        self.pivots.insert(p, r);
        true
    }

    /// Coordinates of `v` in the basis `rows()`, if `v` lies in the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        if !self.contains(v) {
            return None;
        }
        let mut c = SparseVec::new();
        for (k, p) in self.pivots.keys().enumerate() {
            if let Some(x) = v.get(p) {
                c.insert(k, x.clone());
            }
        }
        Some(c)
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    let mut rows: Vec<&SparseVec> = m.data.iter().filter(|r| !r.is_empty()).collect();
    rows.sort_by_key(|r| r.len());
    Echelon::from_vectors(rows).rank()
}

/// Basis of the null space, one vector per free column.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVec> {
    let e = Echelon::from_vectors(m.data.iter());
    let pivots: HashSet<usize> = e.pivot_columns().collect();
    let mut out = Vec::new();
    for f in 0..m.cols {
        if pivots.contains(&f) {
            continue;
        }
        let mut v = unit(f);
        for (&p, row) in &e.pivots {
            if let Some(x) = row.get(&f) {
                v.insert(p, -x.clone());
            }
        }
        out.push(v);
    }
    out
}

/// A finite-dimensional space with one label per basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VectorSpace {
    labels: Vec<String>,
}

impl VectorSpace {
    pub fn new(labels: Vec<String>) -> Result<Self, LinalgError> {
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(LinalgError::DuplicateLabel(l.clone()));
            }
        }
        Ok(VectorSpace { labels })
    }

    /// Space with labels `prefix0, prefix1, ...`.
    pub fn indexed(prefix: &str, dim: usize) -> Self {
        VectorSpace {
            labels: (0..dim).map(|i| format!("{prefix}{i}")).collect(),
        }
    }

    pub fn zero() -> Self {
        VectorSpace::default()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Direct sum; labels are prefixed to stay distinct.
    pub fn direct_sum(parts: &[(&str, &VectorSpace)]) -> Self {
        let mut labels = Vec::new();
        for (tag, s) in parts {
            labels.extend(s.labels.iter().map(|l| format!("{tag}:{l}")));
        }
        VectorSpace { labels }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub source: VectorSpace,
    pub target: VectorSpace,
    pub matrix: SparseMatrix,
}

impl LinearMap {
    pub fn new(
        source: VectorSpace,
        target: VectorSpace,
        matrix: SparseMatrix,
    ) -> Result<Self, LinalgError> {
        if matrix.rows() != target.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: target.dim(),
                found: matrix.rows(),
            });
        }
        if matrix.cols() != source.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: source.dim(),
                found: matrix.cols(),
            });
        }
        Ok(LinearMap {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(space: &VectorSpace) -> Self {
        LinearMap {
            source: space.clone(),
            target: space.clone(),
            matrix: SparseMatrix::identity(space.dim()),
        }
    }

    pub fn zero(source: &VectorSpace, target: &VectorSpace) -> Self {
        LinearMap {
            source: source.clone(),
            target: target.clone(),
            matrix: SparseMatrix::zeros(target.dim(), source.dim()),
        }
    }

    /// Map sending source basis vector `j` to `images[j]`.
    pub fn from_images(
        source: VectorSpace,
        target: VectorSpace,
        images: &[SparseVec],
    ) -> Result<Self, LinalgError> {
        if images.len() != source.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: source.dim(),
                found: images.len(),
            });
        }
        let matrix = SparseMatrix::from_columns(target.dim(), images)?;
        Ok(LinearMap {
            source,
            target,
            matrix,
        })
    }

    pub fn apply(&self, v: &SparseVec) -> Result<SparseVec, LinalgError> {
        self.matrix.mul_vec(v)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &LinearMap) -> Result<LinearMap, LinalgError> {
        if first.target.dim() != self.source.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.source.dim(),
                found: first.target.dim(),
            });
        }
        Ok(LinearMap {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&first.matrix)?,
        })
    }

    pub fn rank(&self) -> usize {
        rank(&self.matrix)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

/// Subspace of `k^ambient_dim` held in reduced echelon form.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    echelon: Echelon,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            echelon: Echelon::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let vs: Vec<SparseVec> = (0..ambient_dim).map(unit).collect();
        Self::span(ambient_dim, &vs)
    }

    pub fn span(ambient_dim: usize, vectors: &[SparseVec]) -> Self {
        Subspace {
            ambient_dim,
            echelon: Echelon::from_vectors(vectors.iter()),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    pub fn basis(&self) -> Vec<SparseVec> {
        self.echelon.rows().cloned().collect()
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.echelon.contains(v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.echelon.rows().all(|v| self.contains(v))
    }

    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        self.echelon.coordinates(v)
    }

    /// Vector with the given coordinates in `basis()`.
    pub fn combine(&self, coords: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (k, row) in self.echelon.rows().enumerate() {
            if let Some(c) = coords.get(&k) {
                axpy(&mut out, c, row);
            }
        }
        out
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut e = self.echelon.clone();
        for v in other.echelon.rows() {
            e.insert(v);
        }
        Subspace {
            ambient_dim: self.ambient_dim,
            echelon: e,
        }
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // Kernel of [A | -B] gives pairs with A a = B b.
        let a = self.basis();
        let b = other.basis();
        let mut cols = a.clone();
        cols.extend(b.iter().map(|v| scale(v, &-Rational::one())));
        let m = SparseMatrix::from_columns(self.ambient_dim, &cols)
            .expect("subspace vectors lie in the ambient space");
        let mut out = Vec::new();
        for k in kernel_basis(&m) {
            let mut v = SparseVec::new();
            for (&i, c) in k.range(..a.len()) {
                axpy(&mut v, c, &a[i]);
            }
            out.push(v);
        }
        Subspace::span(self.ambient_dim, &out)
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }
}

/// A quotient `ambient / sub` with explicit projection and chosen lifts.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub space: VectorSpace,
    pub projection: LinearMap,
    /// Ambient vector lifting each quotient basis vector.
    pub lifts: Vec<SparseVec>,
    sub: Echelon,
    free_index: BTreeMap<usize, usize>,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Image of an ambient vector in quotient coordinates.
    pub fn project(&self, v: &SparseVec) -> SparseVec {
        let r = self.sub.reduce(v);
        r.into_iter()
            .map(|(j, x)| (self.free_index[&j], x))
            .collect()
    }

    /// Ambient vector representing the given quotient coordinates.
    pub fn lift(&self, coords: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&k, c) in coords {
            axpy(&mut out, c, &self.lifts[k]);
        }
        out
    }

    pub fn kills(&self, v: &SparseVec) -> bool {
        self.sub.contains(v)
    }

    pub fn relations(&self) -> Subspace {
        Subspace {
            ambient_dim: self.projection.source.dim(),
            echelon: self.sub.clone(),
        }
    }
}

/// Quotient of `ambient` by the span of `sub`.
pub fn quotient_space(ambient: &VectorSpace, sub: &[SparseVec]) -> Result<Quotient, LinalgError> {
    let n = ambient.dim();
    for v in sub {
        if let Some((&j, _)) = v.iter().next_back() {
            if j >= n {
                return Err(LinalgError::DimensionMismatch {
                    expected: n,
                    found: j + 1,
                });
            }
        }
    }
    let e = Echelon::from_vectors(sub.iter());
    let pivots: HashSet<usize> = e.pivot_columns().collect();
    let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    let free_index: BTreeMap<usize, usize> =
        free.iter().enumerate().map(|(k, &j)| (j, k)).collect();
    let space = VectorSpace {
        labels: free.iter().map(|&j| ambient.labels[j].clone()).collect(),
    };
    let mut images = Vec::with_capacity(n);
    for j in 0..n {
        let r = e.reduce(&unit(j));
        images.push(
            r.into_iter()
                .map(|(c, x)| (free_index[&c], x))
                .collect::<SparseVec>(),
        );
    }
    let projection = LinearMap::from_images(ambient.clone(), space.clone(), &images)?;
    let lifts = free.iter().map(|&j| unit(j)).collect();
    Ok(Quotient {
        space,
        projection,
        lifts,
        sub: e,
        free_index,
    })
}

/// Kernel and image of a map, as subspaces of source and target.
#[derive(Clone, Debug)]
pub struct KernelImage {
    pub kernel: VectorSpace,
    pub kernel_basis: Vec<SparseVec>,
    pub image: VectorSpace,
    pub image_basis: Vec<SparseVec>,
}

pub fn map_kernel_image(f: &LinearMap) -> KernelImage {
    let kernel_basis = kernel_basis(&f.matrix);
    let image = Subspace::span(f.target.dim(), &f.matrix.columns());
    let image_basis = image.basis();
    KernelImage {
        kernel: VectorSpace::indexed("ker", kernel_basis.len()),
        kernel_basis,
        image: VectorSpace::indexed("im", image_basis.len()),
        image_basis,
    }
}

/// Integer-valued rational check.
pub fn is_integral(r: &Rational) -> bool {
    r.is_integer()
}

/// Largest absolute value of the entries, for diagnostics.
pub fn max_abs(v: &SparseVec) -> Rational {
    v.values().map(|x| x.abs()).fold(Rational::zero(), |a, b| if b > a { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMatrix::identity(3)), 3);
        assert_eq!(rank(&SparseMatrix::zeros(2, 5)), 0);
        assert_eq!(rank(&SparseMatrix::from_i64(&[vec![1, 2], vec![2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrix::identity(4)).is_empty());
        assert_eq!(kernel_basis(&SparseMatrix::zeros(2, 3)).len(), 3);
        let m = SparseMatrix::from_i64(&[vec![1, 1, 0]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).unwrap().is_empty());
        }
    }

    #[test]
    fn quotient_examples() {
        let amb = VectorSpace::indexed("e", 4);
        let qt = quotient_space(&amb, &[]).unwrap();
        assert_eq!(qt.dim(), 4);
        assert_eq!(qt.projection.matrix, SparseMatrix::identity(4));
        let all: Vec<SparseVec> = (0..4).map(unit).collect();
        assert_eq!(quotient_space(&amb, &all).unwrap().dim(), 0);
        let amb3 = VectorSpace::indexed("e", 3);
        let v = vec_from_dense(&[q(1), q(2), q(3)]);
        let qt = quotient_space(&amb3, &[v.clone()]).unwrap();
        assert_eq!(qt.dim(), 2);
        assert!(qt.project(&v).is_empty());
        assert!(quotient_space(&amb3, &[unit(7)]).is_err());
    }

    #[test]
    fn kernel_image_examples() {
        let s = VectorSpace::indexed("e", 5);
        let ki = map_kernel_image(&LinearMap::identity(&s));
        assert_eq!((ki.kernel.dim(), ki.image.dim()), (0, 5));
        let ki = map_kernel_image(&LinearMap::zero(&s, &s));
        assert_eq!((ki.kernel.dim(), ki.image.dim()), (5, 0));
        let s3 = VectorSpace::indexed("e", 3);
        let m = SparseMatrix::from_i64(&[vec![1, 2, 3], vec![0, 0, 0], vec![2, 4, 6]]);
        let f = LinearMap::new(s3.clone(), s3, m).unwrap();
        let ki = map_kernel_image(&f);
        assert_eq!((ki.kernel.dim(), ki.image.dim()), (2, 1));
    }

    #[test]
    fn subspace_intersection() {
        let a = Subspace::span(3, &[unit(0), unit(1)]);
        let b = Subspace::span(3, &[unit(1), unit(2)]);
        let c = a.intersect(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&unit(1)));
        assert_eq!(a.sum(&b).dim(), 3);
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(VectorSpace::new(vec!["a".into(), "a".into()]).is_err());
    }
}
