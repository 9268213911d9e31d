//! Global operators pulled back to the projective line as matrices of
//! homogeneous bivariate polynomials, and the named tridiagonal matrices
//! whose kernels identify the sheaves of interest.
//!
//! A HomMatrix represents a map R^cols(twist_src) -> R^rows(twist_tgt) over
//! R = k[s,t]; every entry is homogeneous of degree twist_tgt - twist_src.
//! The operator of a module M is Theta = s^2 E - t^2 F + st H with twists
//! (0, 2); its j-th power has twists (0, 2j).

use thiserror::Error;

use crate::field::Field;
use crate::matrix::Matrix;
use crate::sl2::{binom_mod, Sl2Module};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ThetaError {
    #[error("parameter {0} out of range for matrix family {1}")]
    OutOfRange(usize, &'static str),
}

/// Homogeneous bivariate polynomial of degree d, stored as d+1 coefficients;
/// index k holds the coefficient of s^{d-k} t^k.
pub type HomPoly<K> = Vec<<K as Field>::El>;

fn hp_zero<K: Field>(field: &K, deg: usize) -> HomPoly<K> {
    vec![field.zero(); deg + 1]
}

fn hp_mul<K: Field>(field: &K, a: &HomPoly<K>, b: &HomPoly<K>) -> HomPoly<K> {
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if field.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = field.mul(x, y);
            out[i + j] = field.add(&out[i + j], &t);
        }
    }
    out
}

fn hp_add_assign<K: Field>(field: &K, a: &mut HomPoly<K>, b: &HomPoly<K>) {
    for (x, y) in a.iter_mut().zip(b) {
        *x = field.add(x, y);
    }
}

pub fn hp_to_string<K: Field>(field: &K, a: &HomPoly<K>) -> String {
    let deg = a.len() - 1;
    let terms: Vec<String> = a
        .iter()
        .enumerate()
        .filter(|(_, c)| !field.is_zero(c))
        .map(|(k, c)| {
            let mono = match (deg - k, k) {
                (0, 0) => String::new(),
                (i, 0) if i == 1 => "s".into(),
                (i, 0) => format!("s^{i}"),
                (0, j) if j == 1 => "t".into(),
                (0, j) => format!("t^{j}"),
                (i, j) => {
                    let sp = if i == 1 { "s".into() } else { format!("s^{i}") };
                    let tp = if j == 1 { "t".into() } else { format!("t^{j}") };
                    format!("{sp}{tp}")
                }
            };
            let cs = field.fmt_el(c);
            if mono.is_empty() {
                cs
            } else if cs == "1" {
                mono
            } else {
                format!("{cs}{mono}")
            }
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct HomMatrix<K: Field> {
    field: K,
    rows: usize,
    cols: usize,
    twist_src: i64,
    twist_tgt: i64,
    /// Row-major; each entry has length entry_deg() + 1.
    entries: Vec<HomPoly<K>>,
}

impl<K: Field> HomMatrix<K> {
    pub fn zero(field: &K, rows: usize, cols: usize, twist_src: i64, twist_tgt: i64) -> HomMatrix<K> {
        assert!(twist_tgt >= twist_src, "entry degree must be non-negative");
        let deg = (twist_tgt - twist_src) as usize;
        HomMatrix {
            field: field.clone(),
            rows,
            cols,
            twist_src,
            twist_tgt,
            entries: vec![hp_zero(field, deg); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn twists(&self) -> (i64, i64) {
        (self.twist_src, self.twist_tgt)
    }

    pub fn entry_deg(&self) -> usize {
        (self.twist_tgt - self.twist_src) as usize
    }

    pub fn get(&self, i: usize, j: usize) -> &HomPoly<K> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: HomPoly<K>) {
        assert_eq!(v.len(), self.entry_deg() + 1, "inhomogeneous entry");
        self.entries[i * self.cols + j] = v;
    }

    /// Adds c * s^{deg-k} t^k to entry (i, j).
    pub fn add_monomial(&mut self, i: usize, j: usize, k: usize, c: K::El) {
        let f = self.field.clone();
        let e = &mut self.entries[i * self.cols + j];
        e[k] = f.add(&e[k], &c);
    }

    pub fn is_zero(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.iter().all(|c| self.field.is_zero(c)))
    }

    /// self o other; twists must chain.
    pub fn compose(&self, other: &HomMatrix<K>) -> HomMatrix<K> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        assert_eq!(self.twist_src, other.twist_tgt, "twists do not chain");
        let f = &self.field;
        let mut out = HomMatrix::zero(f, self.rows, other.cols, other.twist_src, self.twist_tgt);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.iter().all(|c| f.is_zero(c)) {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = hp_mul(f, a, other.get(l, j));
                    let e = &mut out.entries[i * other.cols + j];
                    hp_add_assign(f, e, &prod);
                }
            }
        }
        out
    }

    /// Returns the same matrix as a map R(twist_src + n) -> R(twist_tgt + n).
    pub fn shift(&self, n: i64) -> HomMatrix<K> {
        let mut m = self.clone();
        m.twist_src += n;
        m.twist_tgt += n;
        m
    }

    pub fn eval(&self, s: &K::El, t: &K::El) -> Matrix<K> {
        let f = &self.field;
        let deg = self.entry_deg();
        Matrix::from_fn(f, self.rows, self.cols, |i, j| {
            let mut acc = f.zero();
            for (k, c) in self.get(i, j).iter().enumerate() {
                let mono = f.mul(&f.pow(s, (deg - k) as u128), &f.pow(t, k as u128));
                acc = f.add(&acc, &f.mul(c, &mono));
            }
            acc
        })
    }

    /// The induced linear map from the degree-d component of the source
    /// (total coefficient degree d) to the degree d + entry_deg() component
    /// of the target.  Source slot (j, k) is the coefficient of s^{d-k}t^k
    /// in coordinate j; target slots likewise in degree d + entry_deg().
    pub fn linear_component(&self, d: usize) -> Matrix<K> {
        let f = &self.field;
        let deg = self.entry_deg();
        let src_w = d + 1;
        let tgt_w = d + deg + 1;
        let mut m = Matrix::zero(f, self.rows * tgt_w, self.cols * src_w);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                for (l, c) in e.iter().enumerate() {
                    if f.is_zero(c) {
                        continue;
                    }
                    for k in 0..src_w {
                        let cur = f.add(m.get(i * tgt_w + k + l, j * src_w + k), c);
                        m.set(i * tgt_w + k + l, j * src_w + k, cur);
                    }
                }
            }
        }
        m
    }

    pub fn to_string(&self) -> String {
        (0..self.rows)
            .map(|i| {
                let row: Vec<String> = (0..self.cols)
                    .map(|j| hp_to_string(&self.field, self.get(i, j)))
                    .collect();
                format!("[{}]", row.join(", "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Theta_M = s^2 E - t^2 F + st H, twists (0, 2).
pub fn build_theta<K: Field>(m: &Sl2Module<K>) -> HomMatrix<K> {
    let f = m.field();
    let n = m.dim();
    let mut out = HomMatrix::zero(f, n, n, 0, 2);
    for i in 0..n {
        for j in 0..n {
            out.set(
                i,
                j,
                vec![
                    m.e().get(i, j).clone(),
                    m.h().get(i, j).clone(),
                    f.neg(m.f().get(i, j)),
                ],
            );
        }
    }
    out
}

/// The j-fold composite Theta(2(j-1)) o ... o Theta(2) o Theta, twists (0, 2j).
pub fn theta_power<K: Field>(m: &Sl2Module<K>, j: usize) -> HomMatrix<K> {
    assert!(j >= 1);
    let theta = build_theta(m);
    let mut acc = theta.clone();
    for _ in 1..j {
        acc = theta.shift(acc.twists().1).compose(&acc);
    }
    acc
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NamedKind {
    MEps,
    B,
    BPrime,
    C,
    D,
}

/// The explicit tridiagonal-with-corrections matrices.  For MEps, B, BPrime,
/// C the parameter is lambda; for D it is a with 0 <= a < p-1.  eps is used
/// only by MEps.
pub fn named_matrix<K: Field>(
    field: &K,
    kind: NamedKind,
    param: usize,
    eps: Option<&K::El>,
) -> Result<HomMatrix<K>, ThetaError> {
    let p = field.char() as usize;
    match kind {
        NamedKind::B => Ok(matrix_b(field, param)),
        NamedKind::C => {
            // (i - lambda - 1) t^2 below, (lambda - 2i) st on, (i + 1) s^2
            // above the diagonal; size lambda + 1.
            let lambda = param as i64;
            let n = param + 1;
            let mut m = HomMatrix::zero(field, n, n, 0, 2);
            for i in 0..n {
                let ii = i as i64;
                if i >= 1 {
                    m.add_monomial(i, i - 1, 2, field.from_int(ii - lambda - 1));
                }
                m.add_monomial(i, i, 1, field.from_int(lambda - 2 * ii));
                if i + 1 < n {
                    m.add_monomial(i, i + 1, 0, field.from_int(ii + 1));
                }
            }
            Ok(m)
        }
        NamedKind::BPrime => {
            // Trailing principal rp x rp minor of B(lambda).
            if param < p {
                return Err(ThetaError::OutOfRange(param, "B_prime"));
            }
            let a = param % p;
            let n = param - a;
            let b = matrix_b(field, param);
            let mut m = HomMatrix::zero(field, n, n, 0, 2);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, b.get(a + 1 + i, a + 1 + j).clone());
                }
            }
            Ok(m)
        }
        NamedKind::MEps => {
            // Rows and columns indexed a+1..lambda: i s^2 below, (2i - a) st
            // on, (i - a) t^2 above the diagonal, with corrections
            // -(a+1) binom(r,q) eps^{qp} s^2 in the first row at columns
            // qp + a, q = 1..r.
            if param < p {
                return Err(ThetaError::OutOfRange(param, "M_eps"));
            }
            let eps = eps.expect("M_eps requires eps");
            let (r, a) = (param / p, param % p);
            let n = param - a; // rp
            let idx = |i: usize| i - (a + 1);
            let mut m = HomMatrix::zero(field, n, n, 0, 2);
            for i in (a + 1)..=param {
                let ii = i as i64;
                let aa = a as i64;
                if i >= a + 2 {
                    m.add_monomial(idx(i), idx(i - 1), 0, field.from_int(ii));
                }
                m.add_monomial(idx(i), idx(i), 1, field.from_int(2 * ii - aa));
                if i + 1 <= param {
                    m.add_monomial(idx(i), idx(i + 1), 2, field.from_int(ii - aa));
                }
            }
            for q in 1..=r {
                let c = field.mul(
                    &field.mul(
                        &field.from_int(-(a as i64 + 1)),
                        &binom_mod(field, r as i64, q as i64),
                    ),
                    &field.pow(eps, (q * p) as u128),
                );
                m.add_monomial(idx(a + 1), idx(q * p + a), 0, c);
            }
            Ok(m)
        }
        NamedKind::D => {
            // Block matrix [[B(2p-a-2), D'(a)], [0, B(a)^dagger]] of size 2p,
            // where D'(a) has (1/(i+1)) s^2 when i - j = p-a-2 plus
            // (1/(a+1)) t^2 at (p, a), and dagger transposes and swaps s, t.
            let a = param;
            if a + 1 >= p {
                return Err(ThetaError::OutOfRange(param, "D"));
            }
            let top = 2 * p - a - 1; // rows/cols of B(2p-a-2)
            let n = 2 * p;
            let mut m = HomMatrix::zero(field, n, n, 0, 2);
            let b_top = matrix_b(field, 2 * p - a - 2);
            for i in 0..top {
                for j in 0..top {
                    m.set(i, j, b_top.get(i, j).clone());
                }
            }
            let b_a = matrix_b(field, a);
            for i in 0..=a {
                for j in 0..=a {
                    // Transpose and swap s, t: reverse the coefficient list.
                    let mut e = b_a.get(j, i).clone();
                    e.reverse();
                    m.set(top + i, top + j, e);
                }
            }
            for i in 0..top {
                for j in 0..=a {
                    if i >= j && i - j == p - a - 2 {
                        let c = field.inv(&field.from_int(i as i64 + 1)).expect("i+1 < p here");
                        m.add_monomial(i, top + j, 0, c);
                    }
                }
            }
            let c = field.inv(&field.from_int(a as i64 + 1)).unwrap();
            m.add_monomial(p, top + a, 2, c);
            Ok(m)
        }
    }
}

fn matrix_b<K: Field>(field: &K, lambda: usize) -> HomMatrix<K> {
    // -i t^2 below, (lambda - 2i) st on, (lambda - i) s^2 above the diagonal.
    let n = lambda + 1;
    let l = lambda as i64;
    let mut m = HomMatrix::zero(field, n, n, 0, 2);
    for i in 0..n {
        let ii = i as i64;
        if i >= 1 {
            m.add_monomial(i, i - 1, 2, field.from_int(-ii));
        }
        m.add_monomial(i, i, 1, field.from_int(l - 2 * ii));
        if i + 1 < n {
            m.add_monomial(i, i + 1, 0, field.from_int(l - ii));
        }
    }
    m
}
