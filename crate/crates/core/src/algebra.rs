//! Finite-dimensional Lie algebras given by structure constants.
//!
//! A [`LieAlgebra`] stores `c^k_{ij}` sparsely under canonical keys `i < j`;
//! entries with `i > j` follow from antisymmetry. Indices are 0-based in
//! code and 1-based in files and error messages.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraVector(Vec<Rational>);

impl AlgebraVector {
    pub fn new(components: Vec<Rational>) -> Self {
        AlgebraVector(components)
    }

    pub fn zero(dim: usize) -> Self {
        AlgebraVector(vec![Rational::zero(); dim])
    }

    /// Basis vector `e_{i+1}`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = crate::rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_components(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        AlgebraVector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn dot(&self, other: &AlgebraVector) -> Rational {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }
}

impl std::ops::Add for &AlgebraVector {
    type Output = AlgebraVector;
    fn add(self, rhs: &AlgebraVector) -> AlgebraVector {
        AlgebraVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl std::ops::Sub for &AlgebraVector {
    type Output = AlgebraVector;
    fn sub(self, rhs: &AlgebraVector) -> AlgebraVector {
        AlgebraVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl std::ops::Index<usize> for AlgebraVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl fmt::Display for AlgebraVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Dense exact matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = crate::rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_columns(cols: &[AlgebraVector]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, AlgebraVector::dim);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..r {
                m[(i, j)] = col[i].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> AlgebraVector {
        AlgebraVector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &AlgebraVector) -> AlgebraVector {
        assert_eq!(self.cols, v.dim(), "dimension mismatch");
        AlgebraVector(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
                .collect(),
        )
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .sum()
    }

    /// Exact rank by Gaussian elimination over the rationals.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            if pivot != rank {
                for j in 0..m.cols {
                    m.data.swap(pivot * m.cols + j, rank * m.cols + j);
                }
            }
            let p = m[(rank, col)].clone();
            for r in rank + 1..m.rows {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] / &p;
                for j in col..m.cols {
                    let delta = &factor * &m[(rank, j)];
                    m[(r, j)] -= delta;
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, row * m.cols + j);
                }
            }
            let inv = crate::rational::one() / &m[(row, col)];
            for j in 0..m.cols {
                m[(row, j)] *= &inv;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for j in 0..m.cols {
                    let delta = &factor * &m[(row, j)];
                    m[(r, j)] -= delta;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Basis of the null space, one vector per free column.
    pub fn nullspace(&self) -> Vec<AlgebraVector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = AlgebraVector::zero(self.cols);
                v.0[f] = crate::rational::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v.0[pc] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Columns with the given indices.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        if cols.is_empty() {
            return Matrix::zeros(self.rows, 0);
        }
        Matrix::from_columns(&cols.iter().map(|&j| self.column(j)).collect::<Vec<_>>())
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows);
        let mut out = Self::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..rhs.cols {
                out[(i, self.cols + j)] = rhs[(i, j)].clone();
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

#[derive(Clone, Debug)]
pub struct LieAlgebra {
    name: String,
    dim: usize,
    /// Canonical entries `(i, j, k) -> c^k_{ij}` with `i < j`, no zeros.
    entries: BTreeMap<(usize, usize, usize), Rational>,
    /// `table[i * dim + j]` lists `(k, c^k_{ij})` for every ordered pair.
    table: Vec<Vec<(usize, Rational)>>,
}

impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.entries == other.entries
    }
}

impl LieAlgebra {
    /// Builds and validates (including the Jacobi identity).
    pub fn new<I>(name: impl Into<String>, dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize, usize), Rational)>,
    {
        let alg = Self::new_unchecked(name, dim, entries)?;
        alg.validate()?;
        Ok(alg)
    }

    /// Builds from canonical 0-based entries, checking index shape but not
    /// the Jacobi identity. Call [`LieAlgebra::validate`] before trusting it.
    pub fn new_unchecked<I>(name: impl Into<String>, dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize, usize), Rational)>,
    {
        if dim == 0 {
            return Err(Error::Malformed("dimension must be positive".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut map = BTreeMap::new();
        for ((i, j, k), c) in entries {
            for idx in [i, j, k] {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange {
                        index: idx + 1,
                        dim,
                    });
                }
            }
            if !seen.insert((i, j, k)) {
                return Err(Error::DuplicateEntry {
                    i: i + 1,
                    j: j + 1,
                    k: k + 1,
                });
            }
            if i == j {
                if !c.is_zero() {
                    return Err(Error::DiagonalEntry { i: i + 1, k: k + 1 });
                }
                continue;
            }
            if i > j {
                return Err(Error::NonCanonicalEntry {
                    i: i + 1,
                    j: j + 1,
                    k: k + 1,
                });
            }
            if !c.is_zero() {
                map.insert((i, j, k), c);
            }
        }
        let mut table = vec![Vec::new(); dim * dim];
        for (&(i, j, k), c) in &map {
            table[i * dim + j].push((k, c.clone()));
            table[j * dim + i].push((k, -c));
        }
        Ok(LieAlgebra {
            name: name.into(),
            dim,
            entries: map,
            table,
        })
    }

    /// Checks the Jacobi identity, reporting the first violating triple.
    pub fn validate(&self) -> Result<()> {
        if let Some((&(i, j, l, m), r)) = self.jacobi_defect().iter().next() {
            return Err(Error::JacobiViolation {
                i: i + 1,
                j: j + 1,
                l: l + 1,
                m: m + 1,
                residual: format_rational(r),
            });
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_abelian(&self) -> bool {
        self.entries.is_empty()
    }

    /// Canonical nonzero entries `(i, j, k) -> c^k_{ij}`, `i < j`, 0-based.
    pub fn entries(&self) -> &BTreeMap<(usize, usize, usize), Rational> {
        &self.entries
    }

    /// Nonzero `(k, c^k_{ij})` for the ordered pair `(i, j)`.
    pub fn structure(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.table[i * self.dim + j]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Rational {
        self.structure(i, j)
            .iter()
            .find(|(kk, _)| *kk == k)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    fn check_dim(&self, v: &AlgebraVector) -> Result<()> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            });
        }
        Ok(())
    }

    pub fn bracket(&self, v: &AlgebraVector, w: &AlgebraVector) -> Result<AlgebraVector> {
        self.check_dim(v)?;
        self.check_dim(w)?;
        let mut out = AlgebraVector::zero(self.dim);
        for (&(i, j, k), c) in &self.entries {
            // v^i w^j - v^j w^i for the canonical pair
            let coeff = &v.0[i] * &w.0[j] - &v.0[j] * &w.0[i];
            if !coeff.is_zero() {
                out.0[k] += coeff * c;
            }
        }
        Ok(out)
    }

    /// Matrix of `ad_v`; column `j` is `[v, e_j]`.
    pub fn ad(&self, v: &AlgebraVector) -> Result<Matrix> {
        self.check_dim(v)?;
        let n = self.dim;
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            if v.0[i].is_zero() {
                continue;
            }
            for j in 0..n {
                for (k, c) in self.structure(i, j) {
                    m[(*k, j)] += &v.0[i] * c;
                }
            }
        }
        Ok(m)
    }

    fn ad_basis(&self, i: usize) -> Matrix {
        self.ad(&AlgebraVector::basis(self.dim, i))
            .expect("basis vector has the algebra dimension")
    }

    /// Cyclic sum `[e_i,[e_j,e_l]] + [e_j,[e_l,e_i]] + [e_l,[e_i,e_j]]`
    /// for `i < j < l`, keyed `(i, j, l, m)` on its nonzero components.
    pub fn jacobi_defect(&self) -> BTreeMap<(usize, usize, usize, usize), Rational> {
        let n = self.dim;
        let mut out = BTreeMap::new();
        let nested = |a: usize, b: usize, c: usize, acc: &mut Vec<Rational>| {
            for (p, cbc) in self.structure(b, c) {
                for (m, cap) in self.structure(a, *p) {
                    acc[*m] += cbc * cap;
                }
            }
        };
        for i in 0..n {
            for j in i + 1..n {
                for l in j + 1..n {
                    let mut acc = vec![Rational::zero(); n];
                    nested(i, j, l, &mut acc);
                    nested(j, l, i, &mut acc);
                    nested(l, i, j, &mut acc);
                    for (m, r) in acc.into_iter().enumerate() {
                        if !r.is_zero() {
                            out.insert((i, j, l, m), r);
                        }
                    }
                }
            }
        }
        out
    }

    /// `K_{ab} = Tr(ad_{e_a} ad_{e_b})`.
    pub fn killing_form(&self) -> Matrix {
        let n = self.dim;
        let ads: Vec<Matrix> = (0..n).map(|i| self.ad_basis(i)).collect();
        let mut k = Matrix::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let t = ads[a].mul(&ads[b]).trace();
                k[(b, a)] = t.clone();
                k[(a, b)] = t;
            }
        }
        k
    }

    /// `chi(e_a) = Tr ad_{e_a}`.
    ///
    /// Note the sign: some texts use `-Tr ad_v`. With this choice the trace of
    /// the canonical endomorphism field equals `chi` evaluated on the Liouville
    /// field.
    pub fn characteristic_form(&self) -> AlgebraVector {
        AlgebraVector(
            (0..self.dim)
                .map(|a| {
                    (0..self.dim)
                        .map(|p| self.structure_constant(a, p, p))
                        .sum()
                })
                .collect(),
        )
    }

    /// `omega(v, w, z) = Tr(ad_{[v,w]} ad_z)`.
    pub fn lie_three_form(
        &self,
        v: &AlgebraVector,
        w: &AlgebraVector,
        z: &AlgebraVector,
    ) -> Result<Rational> {
        let vw = self.bracket(v, w)?;
        Ok(self.ad(&vw)?.mul(&self.ad(z)?).trace())
    }

    pub fn to_document(&self) -> AlgebraDocument {
        AlgebraDocument {
            name: self.name.clone(),
            dim: self.dim,
            structure: self
                .entries
                .iter()
                .map(|(&(i, j, k), c)| StructureEntry {
                    i: i + 1,
                    j: j + 1,
                    k: k + 1,
                    c: format_rational(c),
                })
                .collect(),
        }
    }
}

/// On-disk algebra description; indices are 1-based.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub name: String,
    pub dim: usize,
    pub structure: Vec<StructureEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: String,
}

impl AlgebraDocument {
    pub fn into_algebra(self) -> Result<LieAlgebra> {
        let dim = self.dim;
        let mut entries = Vec::with_capacity(self.structure.len());
        for e in &self.structure {
            for idx in [e.i, e.j, e.k] {
                if idx == 0 || idx > dim {
                    return Err(Error::IndexOutOfRange { index: idx, dim });
                }
            }
            entries.push(((e.i - 1, e.j - 1, e.k - 1), parse_rational(&e.c)?));
        }
        LieAlgebra::new(self.name, dim, entries)
    }
}

/// Parses and validates a JSON algebra document.
pub fn load_algebra(doc: &str) -> Result<LieAlgebra> {
    let parsed: AlgebraDocument =
        serde_json::from_str(doc).map_err(|e| Error::Malformed(e.to_string()))?;
    parsed.into_algebra()
}
