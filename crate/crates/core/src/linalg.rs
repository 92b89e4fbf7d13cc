//! Exact sparse linear algebra over the rationals.
//!
//! Vectors are sparse maps from coordinate index to nonzero rational. An
//! [`Echelon`] stores vectors keyed by their largest nonzero index, so
//! reducing a vector only ever moves its support downwards; normal forms
//! therefore prefer low indices.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::rational::Rational;

pub type SparseVec = BTreeMap<usize, Rational>;

pub fn unit_vec(i: usize) -> SparseVec {
    let mut v = SparseVec::new();
    v.insert(i, Rational::from_integer(1.into()));
    v
}

/// `y += c x`.
pub fn axpy(y: &mut SparseVec, c: &Rational, x: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (i, xi) in x {
        let e = y.entry(*i).or_insert_with(Rational::zero);
        *e += c * xi;
        if e.is_zero() {
            y.remove(i);
        }
    }
}

pub fn scaled(x: &SparseVec, c: &Rational) -> SparseVec {
    if c.is_zero() {
        return SparseVec::new();
    }
    x.iter().map(|(i, v)| (*i, v * c)).collect()
}

/// Row echelon store with optional bookkeeping of how each stored vector
/// was combined from tagged inputs.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, (SparseVec, SparseVec)>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduces `v` (tagged `tag`) against stored rows. Returns the residual
    /// and the updated tag: `residual = v - Σ c_r row_r`, `tag' = tag - Σ c_r tag_r`.
    pub fn reduce(&self, mut v: SparseVec, mut tag: SparseVec) -> (SparseVec, SparseVec) {
        let mut bound = usize::MAX;
        loop {
            let next = v.range(..bound).rev().find(|(i, _)| self.rows.contains_key(i)).map(|(i, c)| (*i, c.clone()));
            let Some((p, c)) = next else { break };
            let (row, rtag) = &self.rows[&p];
            let f = -(c / &row[&p]);
            axpy(&mut v, &f, row);
            axpy(&mut tag, &f, rtag);
            bound = p;
        }
        (v, tag)
    }

    /// Inserts a reduced nonzero residual. Returns its pivot.
    fn insert_reduced(&mut self, v: SparseVec, tag: SparseVec) -> usize {
        let p = *v.keys().next_back().expect("nonzero residual");
        self.rows.insert(p, (v, tag));
        p
    }

    /// Adds `v`; returns `Ok(pivot)` if independent, else `Err(tag)` with
    /// the dependency `tag' = tag - Σ ...` whose combination vanishes.
    pub fn push(&mut self, v: SparseVec, tag: SparseVec) -> Result<usize, SparseVec> {
        let (r, t) = self.reduce(v, tag);
        if r.is_empty() {
            Err(t)
        } else {
            Ok(self.insert_reduced(r, t))
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone(), SparseVec::new()).0.is_empty()
    }
}

/// Kernel of the map sending basis vector `j` to `images[j]`.
pub fn kernel(images: &[SparseVec]) -> Vec<SparseVec> {
    let mut ech = Echelon::new();
    let mut out = Vec::new();
    for (j, img) in images.iter().enumerate() {
        if let Err(dep) = ech.push(img.clone(), unit_vec(j)) {
            out.push(dep);
        }
    }
    out
}

pub fn rank(vectors: &[SparseVec]) -> usize {
    let mut ech = Echelon::new();
    for v in vectors {
        let _ = ech.push(v.clone(), SparseVec::new());
    }
    ech.rank()
}

/// A subspace with a fixed basis, supporting coordinate solves.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub basis: Vec<SparseVec>,
    ech: Echelon,
}

impl Subspace {
    /// Builds from independent vectors; dependent ones are dropped.
    pub fn new(vectors: Vec<SparseVec>) -> Self {
        let mut ech = Echelon::new();
        let mut basis = Vec::new();
        for v in vectors {
            let idx = basis.len();
            if ech.push(v.clone(), unit_vec(idx)).is_ok() {
                basis.push(v);
            }
        }
        Self { basis, ech }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `v` against the basis, or `None` if `v` is outside.
    pub fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        let (r, t) = self.ech.reduce(v.clone(), SparseVec::new());
        if r.is_empty() {
            Some(scaled(&t, &Rational::from_integer((-1).into())))
        } else {
            None
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.ech.contains(v)
    }
}

/// `Z / B` for nested subspaces given by spanning sets.
#[derive(Clone, Debug)]
pub struct Quotient {
    /// Representatives, each reduced modulo `B`.
    pub reps: Vec<SparseVec>,
    ech: Echelon,
    pub cycles_dim: usize,
    pub boundaries_dim: usize,
}

impl Quotient {
    pub fn new(cycles: &[SparseVec], boundaries: &[SparseVec]) -> Self {
        let mut ech = Echelon::new();
        for b in boundaries {
            let _ = ech.push(b.clone(), SparseVec::new());
        }
        let boundaries_dim = ech.rank();
        let b_only = ech.clone();
        let mut reps = Vec::new();
        let mut cycles_dim = boundaries_dim;
        for z in cycles {
            let idx = reps.len();
            if ech.push(z.clone(), unit_vec(idx)).is_ok() {
                reps.push(b_only.reduce(z.clone(), SparseVec::new()).0);
                cycles_dim += 1;
            }
        }
        Self { reps, ech, cycles_dim, boundaries_dim }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Class coordinates of a cycle, or `None` if it is not in `Z`.
    pub fn class_of(&self, z: &SparseVec) -> Option<SparseVec> {
        let (r, t) = self.ech.reduce(z.clone(), SparseVec::new());
        if r.is_empty() {
            Some(scaled(&t, &Rational::from_integer((-1).into())))
        } else {
            None
        }
    }
}

/// Dense matrix helpers for small induced maps.
pub type Dense = Vec<Vec<Rational>>;

pub fn dense_from_columns(cols: &[SparseVec], rows: usize) -> Dense {
    let mut m = vec![vec![Rational::zero(); cols.len()]; rows];
    for (j, c) in cols.iter().enumerate() {
        for (i, v) in c {
            m[*i][j] = v.clone();
        }
    }
    m
}

pub fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let k = b.len();
    let m = b.first().map(|r| r.len()).unwrap_or(0);
    let mut out = vec![vec![Rational::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    out
}

pub fn dense_rank(a: &Dense) -> usize {
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let vecs: Vec<SparseVec> = (0..cols)
        .map(|j| a.iter().enumerate().filter(|(_, r)| !r[j].is_zero()).map(|(i, r)| (i, r[j].clone())).collect())
        .collect();
    rank(&vecs)
}

pub fn dense_identity(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::from_integer(1.into()) } else { Rational::zero() }).collect())
        .collect()
}

/// Inverse of a square matrix, or `None` if singular.
pub fn dense_inverse(a: &Dense) -> Option<Dense> {
    let n = a.len();
    let mut m: Dense = a.iter().zip(dense_identity(n)).map(|(r, id)| r.iter().cloned().chain(id).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|r| !m[*r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(&row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Column `j` of a dense matrix as a sparse vector.
pub fn dense_column(a: &Dense, j: usize) -> SparseVec {
    a.iter().enumerate().filter(|(_, r)| !r[j].is_zero()).map(|(i, r)| (i, r[j].clone())).collect()
}

/// Submatrix on the given rows and columns.
pub fn dense_sub(a: &Dense, rows: &[usize], cols: &[usize]) -> Dense {
    rows.iter().map(|i| cols.iter().map(|j| a[*i][*j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn v(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|(i, c)| (*i, rat(*c))).collect()
    }

    #[test]
    fn kernel_of_rank_one_map() {
        // e0 -> (1,2), e1 -> (2,4), e2 -> 0
        let imgs = vec![v(&[(0, 1), (1, 2)]), v(&[(0, 2), (1, 4)]), v(&[])];
        let k = kernel(&imgs);
        assert_eq!(k.len(), 2);
        for z in &k {
            let mut s = SparseVec::new();
            for (j, c) in z {
                axpy(&mut s, c, &imgs[*j]);
            }
            assert!(s.is_empty());
        }
    }

    #[test]
    fn subspace_coordinates() {
        let s = Subspace::new(vec![v(&[(0, 1), (2, 1)]), v(&[(1, 1)]), v(&[(0, 2), (2, 2)])]);
        assert_eq!(s.dim(), 2);
        let c = s.coords(&v(&[(0, 3), (1, -1), (2, 3)])).unwrap();
        assert_eq!(c, v(&[(0, 3), (1, -1)]));
        assert!(s.coords(&v(&[(0, 1)])).is_none());
    }

    #[test]
    fn inverse_of_triangular() {
        let a = vec![vec![rat(1), rat(2)], vec![rat(0), rat(1)]];
        let inv = dense_inverse(&a).unwrap();
        assert_eq!(dense_mul(&a, &inv), dense_identity(2));
        assert!(dense_inverse(&vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]]).is_none());
    }

    #[test]
    fn quotient_reps_are_normal_forms() {
        // Z = span(e0, e1), B = span(e1)
        let q = Quotient::new(&[v(&[(0, 1), (1, 5)]), v(&[(1, 1)])], &[v(&[(1, 1)])]);
        assert_eq!(q.dim(), 1);
        assert_eq!(q.reps[0], v(&[(0, 1)]));
        assert_eq!(q.class_of(&v(&[(0, 2), (1, 7)])).unwrap(), v(&[(0, 2)]));
        assert_eq!(q.class_of(&v(&[(1, 3)])).unwrap(), v(&[]));
    }
}
