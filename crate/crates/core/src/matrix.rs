//! Dense matrices over a finite field, plus fraction-free elimination over a
//! polynomial ring for generic-rank questions.

use crate::field::Field;
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<K: Field> {
    rows: usize,
    cols: usize,
    data: Vec<K::El>,
}

impl<K: Field> Matrix<K> {
    pub fn zero(field: &K, rows: usize, cols: usize) -> Matrix<K> {
        Matrix {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &K, n: usize) -> Matrix<K> {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(field: &K, rows: usize, cols: usize, f: impl Fn(usize, usize) -> K::El) -> Matrix<K> {
        let _ = field;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(field: &K, rows: Vec<Vec<K::El>>) -> Matrix<K> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        let _ = field;
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(field: &K, rows: &[Vec<i64>]) -> Matrix<K> {
        Matrix::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|n| field.from_int(*n)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &K::El {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K::El) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[K::El] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self, field: &K) -> bool {
        self.data.iter().all(|a| field.is_zero(a))
    }

    pub fn transpose(&self, field: &K) -> Matrix<K> {
        Matrix::from_fn(field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, field: &K, other: &Matrix<K>) -> Matrix<K> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| field.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, field: &K, other: &Matrix<K>) -> Matrix<K> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| field.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, field: &K, c: &K::El) -> Matrix<K> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| field.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, field: &K, other: &Matrix<K>) -> Matrix<K> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zero(field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if field.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let t = field.mul(a, other.get(k, j));
                    let cur = field.add(out.get(i, j), &t);
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, field: &K, v: &[K::El]) -> Vec<K::El> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = field.zero();
                for j in 0..self.cols {
                    let t = field.mul(self.get(i, j), &v[j]);
                    acc = field.add(&acc, &t);
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, field: &K, n: usize) -> Matrix<K> {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(field, self.rows);
        for _ in 0..n {
            acc = acc.mul(field, self);
        }
        acc
    }

    /// Applies a map to every entry (e.g. embedding into an extension field).
    pub fn map<L: Field>(&self, f: impl Fn(&K::El) -> L::El) -> Matrix<L> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self, field: &K) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !field.is_zero(self.get(i, c))) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = field.inv(self.get(r, c)).unwrap();
            for j in c..self.cols {
                let v = field.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || field.is_zero(self.get(i, c)) {
                    continue;
                }
                let factor = self.get(i, c).clone();
                for j in c..self.cols {
                    let t = field.mul(&factor, self.get(r, j));
                    let v = field.sub(self.get(i, j), &t);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &K) -> usize {
        let mut m = self.clone();
        m.rref(field).len()
    }

    /// Canonical basis of the right nullspace: one vector per free column,
    /// with a 1 in the free position.
    pub fn nullspace(&self, field: &K) -> Vec<Vec<K::El>> {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &c in &pivots {
                v[c] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for fc in 0..self.cols {
            if pivot_set[fc] {
                continue;
            }
            let mut v = vec![field.zero(); self.cols];
            v[fc] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(m.get(r, fc));
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of A x = b, if consistent.
    pub fn solve(&self, field: &K, b: &[K::El]) -> Option<Vec<K::El>> {
        assert_eq!(self.rows, b.len());
        let mut aug = Matrix::zero(field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref(field);
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![field.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self, field: &K) -> Option<Matrix<K>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zero(field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, field.one());
        }
        let pivots = aug.rref(field);
        // Invertible iff the left block has a full pivot set.
        if pivots.len() < n || pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
            return None;
        }
        Some(Matrix::from_fn(field, n, n, |i, j| aug.get(i, n + j).clone()))
    }

    pub fn to_string(&self, field: &K) -> String {
        (0..self.rows)
            .map(|i| {
                let row: Vec<String> = (0..self.cols).map(|j| field.fmt_el(self.get(i, j))).collect();
                format!("[{}]", row.join(", "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Generic rank of a matrix of polynomials over K, together with one nonzero
/// rank-sized minor.  The roots of the minor contain every point where the
/// rank drops, so its irreducible factors are a complete candidate list for
/// exceptional points (false positives are discarded by re-evaluation).
///
/// Fraction-free Bareiss elimination with full pivoting; divisions are exact.
pub fn generic_rank_minor<K: Field>(field: &K, mat: &[Vec<Poly<K>>]) -> (usize, Poly<K>) {
    let rows = mat.len();
    let cols = mat.first().map(|r| r.len()).unwrap_or(0);
    let mut m: Vec<Vec<Poly<K>>> = mat.to_vec();
    let mut prev = Poly::one(field);
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        // Smallest-degree pivot keeps intermediate polynomials small.
        let mut best: Option<(usize, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if let Some(d) = m[i][j].degree() {
                    if best.map(|(bd, _, _)| d < bd).unwrap_or(true) {
                        best = Some((d, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        m.swap(k, pi);
        if pj != k {
            for row in m.iter_mut() {
                row.swap(k, pj);
            }
        }
        let pivot = m[k][k].clone();
        for i in k + 1..rows {
            for j in k + 1..cols {
                let a = pivot.mul(field, &m[i][j]);
                let b = m[i][k].mul(field, &m[k][j]);
                m[i][j] = a.sub(field, &b).div_exact(field, &prev);
            }
            m[i][k] = Poly::zero();
        }
        prev = pivot;
        rank = k + 1;
    }
    (rank, prev)
}
