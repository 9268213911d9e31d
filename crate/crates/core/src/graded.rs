//! Graded submodules of free modules over R = k[s,t], computed degreewise.
//!
//! A graded submodule is stored as one echelonized basis per degree of its
//! component inside the ambient free module F = (+)_i R(-m_i).  The degree-d
//! component of F is laid out as consecutive blocks, block i of length
//! max(d - m_i + 1, 0), with in-block index k holding the coefficient of
//! s^{d - m_i - k} t^k.
//!
//! Kernels of homogeneous matrices over R are second syzygies, hence free;
//! this lets a degreewise computation certify completeness of a minimal
//! generating set by comparing its size against the corank of the matrix
//! over the fraction field.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::Field;
use crate::matrix::{generic_rank_minor, Matrix};
use crate::poly::Poly;
use crate::theta::HomMatrix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GradedError {
    #[error("kernel generators incomplete at degree bound {bound}: found {found} of {target}")]
    IncompleteKernel {
        found: usize,
        target: usize,
        bound: i64,
    },
    #[error("saturation did not stabilize within {0} passes")]
    SaturationUnstable(usize),
    #[error("splitting type undetermined from the available degree window")]
    SplittingUndetermined,
}

/// Row-reduced basis of a subspace of k^width; rows are kept fully reduced
/// with unit pivots, sorted by pivot column, so the representation (and any
/// generator extraction built on it) is canonical.
#[derive(Clone, Debug)]
pub struct EchelonBasis<K: Field> {
    width: usize,
    rows: Vec<Vec<K::El>>,
    pivots: Vec<usize>,
}

impl<K: Field> EchelonBasis<K> {
    pub fn new(width: usize) -> EchelonBasis<K> {
        EchelonBasis {
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<K::El>] {
        &self.rows
    }

    /// Reduces v modulo the span; the result has zeros at all pivot columns.
    pub fn reduce(&self, field: &K, v: &[K::El]) -> Vec<K::El> {
        assert_eq!(v.len(), self.width);
        let mut v = v.to_vec();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            if !field.is_zero(&v[piv]) {
                let c = v[piv].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x = field.sub(x, &field.mul(&c, y));
                }
            }
        }
        v
    }

    pub fn contains(&self, field: &K, v: &[K::El]) -> bool {
        self.reduce(field, v).iter().all(|c| field.is_zero(c))
    }

    /// Inserts v if it enlarges the span; returns whether it did.
    pub fn insert(&mut self, field: &K, v: &[K::El]) -> bool {
        let mut v = self.reduce(field, v);
        let piv = match v.iter().position(|c| !field.is_zero(c)) {
            Some(p) => p,
            None => return false,
        };
        let inv = field.inv(&v[piv]).expect("nonzero leading entry");
        for x in v.iter_mut() {
            *x = field.mul(x, &inv);
        }
        // Back-substitute so existing rows stay reduced at the new pivot.
        for row in self.rows.iter_mut() {
            if !field.is_zero(&row[piv]) {
                let c = row[piv].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    *x = field.sub(x, &field.mul(&c, y));
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < piv);
        self.rows.insert(pos, v);
        self.pivots.insert(pos, piv);
        true
    }
}

pub fn block_lengths(twists: &[i64], d: i64) -> Vec<usize> {
    twists.iter().map(|&m| (d - m + 1).max(0) as usize).collect()
}

pub fn component_width(twists: &[i64], d: i64) -> usize {
    block_lengths(twists, d).iter().sum()
}

/// Multiplies a degree-d component vector by s (t_shift = 0) or t
/// (t_shift = 1), landing in degree d + 1.
pub fn mul_component<K: Field>(field: &K, twists: &[i64], d: i64, v: &[K::El], t_shift: usize) -> Vec<K::El> {
    let lens_in = block_lengths(twists, d);
    let lens_out = block_lengths(twists, d + 1);
    let mut out = vec![field.zero(); lens_out.iter().sum()];
    let (mut src, mut dst) = (0usize, 0usize);
    for (li, lo) in lens_in.iter().zip(&lens_out) {
        for k in 0..*li {
            out[dst + k + t_shift] = v[src + k].clone();
        }
        src += li;
        dst += lo;
    }
    out
}

#[derive(Clone, Debug)]
pub struct GradedSubmodule<K: Field> {
    field: K,
    twists: Vec<i64>,
    max_degree: i64,
    /// One entry per degree in min_degree()..=max_degree.
    components: BTreeMap<i64, EchelonBasis<K>>,
}

impl<K: Field> GradedSubmodule<K> {
    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn max_degree(&self) -> i64 {
        self.max_degree
    }

    pub fn min_degree(&self) -> i64 {
        self.twists.iter().copied().min().unwrap_or(self.max_degree + 1)
    }

    pub fn dim_at(&self, d: i64) -> usize {
        self.components.get(&d).map(|b| b.dim()).unwrap_or(0)
    }

    pub fn component(&self, d: i64) -> Option<&EchelonBasis<K>> {
        self.components.get(&d)
    }

    pub fn contains(&self, d: i64, v: &[K::El]) -> bool {
        match self.components.get(&d) {
            Some(b) => b.contains(&self.field, v),
            None => v.iter().all(|c| self.field.is_zero(c)),
        }
    }

    pub fn hilbert(&self, from: i64, to: i64) -> Vec<(i64, usize)> {
        (from..=to).map(|d| (d, self.dim_at(d))).collect()
    }
}

/// The submodule of (+)_i R(-m_i) generated by the given homogeneous vectors;
/// gens are (degree, component-layout vector).  Components are closed under
/// multiplication by s and t up to max_degree.
pub fn submodule_from_generators<K: Field>(
    field: &K,
    twists: &[i64],
    gens: &[(i64, Vec<K::El>)],
    max_degree: i64,
) -> GradedSubmodule<K> {
    let min = twists.iter().copied().min().unwrap_or(max_degree + 1);
    let mut components = BTreeMap::new();
    let mut prev: Option<EchelonBasis<K>> = None;
    for d in min..=max_degree {
        let mut basis = EchelonBasis::new(component_width(twists, d));
        if let Some(p) = &prev {
            for row in p.rows() {
                let s = mul_component(field, twists, d - 1, row, 0);
                basis.insert(field, &s);
                let t = mul_component(field, twists, d - 1, row, 1);
                basis.insert(field, &t);
            }
        }
        for (gd, gv) in gens {
            if *gd == d {
                assert_eq!(gv.len(), basis.width(), "generator layout mismatch");
                basis.insert(field, gv);
            }
        }
        prev = Some(basis.clone());
        components.insert(d, basis);
    }
    GradedSubmodule {
        field: field.clone(),
        twists: twists.to_vec(),
        max_degree,
        components,
    }
}

/// Free graded kernel of a homogeneous matrix, described by a certified
/// minimal generating set.  Generators live in the untwisted ambient R^cols;
/// each is (degree, component-layout vector) with blocks of length degree+1.
#[derive(Clone, Debug)]
pub struct GradedKernel<K: Field> {
    field: K,
    pub cols: usize,
    pub corank: usize,
    pub generators: Vec<(i64, Vec<K::El>)>,
}

impl<K: Field> GradedKernel<K> {
    /// Splitting type of the kernel sheaf: one O(-d) per generator degree d.
    pub fn splitting(&self) -> SplittingType {
        SplittingType::new(self.generators.iter().map(|(d, _)| -d).collect())
    }

    pub fn submodule(&self, max_degree: i64) -> GradedSubmodule<K> {
        submodule_from_generators(
            &self.field,
            &vec![0; self.cols],
            &self.generators,
            max_degree,
        )
    }

    pub fn generator_degrees(&self) -> Vec<i64> {
        self.generators.iter().map(|(d, _)| *d).collect()
    }
}

/// Dehomogenization at s = 1, t = u: entry coefficient index k is the
/// coefficient of u^k.
fn dehomogenize<K: Field>(hm: &HomMatrix<K>) -> Vec<Vec<Poly<K>>> {
    let f = hm.field();
    (0..hm.rows())
        .map(|i| {
            (0..hm.cols())
                .map(|j| Poly::new(f, hm.get(i, j).clone()))
                .collect()
        })
        .collect()
}

/// Generic rank of a homogeneous matrix over the fraction field of R.  For a
/// homogeneous matrix this equals the rank of the dehomogenization at s = 1
/// over k(u), since inverting s preserves rank.
pub fn generic_rank<K: Field>(hm: &HomMatrix<K>) -> usize {
    generic_rank_minor(hm.field(), &dehomogenize(hm)).0
}

/// Minimal generators of ker(hm) as a graded R-submodule of R^cols, computed
/// degreewise.  The kernel is free (a second syzygy over the 2-dimensional
/// regular ring R), so the run is complete exactly when the number of minimal
/// generators reaches cols - generic rank; otherwise an error reports how far
/// it got at the degree bound.
pub fn graded_kernel<K: Field>(
    hm: &HomMatrix<K>,
    bound: i64,
) -> Result<GradedKernel<K>, GradedError> {
    let f = hm.field().clone();
    let cols = hm.cols();
    let corank = cols - generic_rank(hm);
    let twists = vec![0i64; cols];
    let mut gens: Vec<(i64, Vec<K::El>)> = Vec::new();
    let mut prev: Option<EchelonBasis<K>> = None;
    for d in 0..=bound {
        let width = cols * (d as usize + 1);
        let mut comp = EchelonBasis::new(width);
        for v in hm.linear_component(d as usize).nullspace(&f) {
            comp.insert(&f, &v);
        }
        let mut span = EchelonBasis::new(width);
        if let Some(p) = &prev {
            for row in p.rows() {
                let s = mul_component(&f, &twists, d - 1, row, 0);
                span.insert(&f, &s);
                let t = mul_component(&f, &twists, d - 1, row, 1);
                span.insert(&f, &t);
            }
        }
        for row in comp.rows() {
            let red = span.reduce(&f, row);
            if red.iter().any(|c| !f.is_zero(c)) {
                gens.push((d, red.clone()));
                span.insert(&f, &red);
            }
        }
        assert!(gens.len() <= corank, "kernel of a homogeneous matrix must be free");
        prev = Some(comp);
        if gens.len() == corank {
            return Ok(GradedKernel {
                field: f,
                cols,
                corank,
                generators: gens,
            });
        }
    }
    Err(GradedError::IncompleteKernel {
        found: gens.len(),
        target: corank,
        bound,
    })
}

/// Image of hm inside the target R^rows, generated by the matrix columns
/// (each of degree twist_tgt - twist_src).
pub fn image_submodule<K: Field>(hm: &HomMatrix<K>, max_degree: i64) -> GradedSubmodule<K> {
    let f = hm.field();
    let deg = hm.entry_deg();
    let gens: Vec<(i64, Vec<K::El>)> = (0..hm.cols())
        .map(|j| {
            let mut v = Vec::with_capacity(hm.rows() * (deg + 1));
            for i in 0..hm.rows() {
                v.extend(hm.get(i, j).iter().cloned());
            }
            (deg as i64, v)
        })
        .collect();
    submodule_from_generators(f, &vec![0; hm.rows()], &gens, max_degree)
}

/// Dimensions of (R^rows / im hm) in each degree of the range.
pub fn coker_hilbert<K: Field>(hm: &HomMatrix<K>, from: i64, to: i64) -> Vec<(i64, usize)> {
    let im = image_submodule(hm, to);
    (from..=to)
        .map(|d| {
            let full = hm.rows() * (d.max(-1) + 1) as usize;
            (d, full - im.dim_at(d))
        })
        .collect()
}

/// Saturation with respect to the irrelevant ideal (s, t), computed as a
/// degreewise fixpoint: a vector of degree d is admitted when both s v and
/// t v already lie in degree d + 1.  Iterating this exponent-1 test to a
/// fixpoint peels one power of (s, t) per pass, so it agrees with the usual
/// single-shot high-power test on the degrees it can see.  Returns the
/// saturated module together with the largest degree whose component is
/// certain: the top component can never grow (there is no degree above it to
/// test against), and that uncertainty propagates down one degree per pass.
pub fn saturate<K: Field>(
    sub: &GradedSubmodule<K>,
    max_passes: usize,
) -> Result<(GradedSubmodule<K>, i64), GradedError> {
    let f = sub.field.clone();
    let twists = sub.twists.clone();
    let (min, max) = (sub.min_degree(), sub.max_degree);
    let mut comps = sub.components.clone();
    let mut passes = 0usize;
    loop {
        passes += 1;
        if passes > max_passes {
            return Err(GradedError::SaturationUnstable(max_passes));
        }
        let mut changed = false;
        for d in (min..max).rev() {
            let width = component_width(&twists, d);
            if width == 0 {
                continue;
            }
            let next = comps.get(&(d + 1)).expect("contiguous components");
            let next_width = next.width();
            // Column k of the test matrix is the reduction of (s e_k, t e_k)
            // modulo the degree d+1 component; its nullspace is the candidate
            // component, which always contains the current one.
            let mut cols_data = Vec::with_capacity(width);
            for k in 0..width {
                let mut e = vec![f.zero(); width];
                e[k] = f.one();
                let mut col = next.reduce(&f, &mul_component(&f, &twists, d, &e, 0));
                col.extend(next.reduce(&f, &mul_component(&f, &twists, d, &e, 1)));
                cols_data.push(col);
            }
            let m = Matrix::from_fn(&f, 2 * next_width, width, |i, j| cols_data[j][i].clone());
            let mut basis = EchelonBasis::new(width);
            for v in m.nullspace(&f) {
                basis.insert(&f, &v);
            }
            let cur = comps.get_mut(&d).expect("contiguous components");
            if basis.dim() > cur.dim() {
                debug_assert!(cur.rows().iter().all(|r| basis.contains(&f, r)));
                *cur = basis;
                changed = true;
            } else {
                debug_assert_eq!(basis.dim(), cur.dim());
            }
        }
        if !changed {
            break;
        }
    }
    let sat = GradedSubmodule {
        field: f,
        twists,
        max_degree: max,
        components: comps,
    };
    Ok((sat, max - passes as i64))
}

/// Splitting type of a finite direct sum of line bundles on the projective
/// line, as a weakly decreasing list of twists a_i (the bundle (+)_i O(a_i)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingType {
    twists: Vec<i64>,
}

impl SplittingType {
    pub fn new(mut twists: Vec<i64>) -> SplittingType {
        twists.sort_unstable_by(|a, b| b.cmp(a));
        SplittingType { twists }
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn degree(&self) -> i64 {
        self.twists.iter().sum()
    }

    /// Shifts by the twisting sheaf: self tensor O(n).
    pub fn twist(&self, n: i64) -> SplittingType {
        SplittingType::new(self.twists.iter().map(|a| a + n).collect())
    }

    pub fn to_string(&self) -> String {
        if self.twists.is_empty() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.twists.len() {
            let a = self.twists[i];
            let mut m = 1;
            while i + m < self.twists.len() && self.twists[i + m] == a {
                m += 1;
            }
            if m == 1 {
                parts.push(format!("O({a})"));
            } else {
                parts.push(format!("O({a})^{m}"));
            }
            i += m;
        }
        parts.join(" + ")
    }
}

/// Recovers the splitting type (+)_i O(a_i) from section dimensions
/// h(d) = sum_i max(d + a_i + 1, 0) over a contiguous degree window.  The
/// window must start at a degree with h = 0 (with h = 0 below it) and extend
/// past the last jump of the first difference; the reconstruction is checked
/// against every window value and rejected if the window was too short.
pub fn splitting_from_hilbert(h: &[(i64, usize)]) -> Result<SplittingType, GradedError> {
    if h.len() < 2 || h[0].1 != 0 {
        return Err(GradedError::SplittingUndetermined);
    }
    for w in h.windows(2) {
        if w[1].0 != w[0].0 + 1 {
            return Err(GradedError::SplittingUndetermined);
        }
    }
    let diffs: Vec<i64> = h.windows(2).map(|w| w[1].1 as i64 - w[0].1 as i64).collect();
    let n = diffs.len();
    if n < 2 || diffs[n - 1] != diffs[n - 2] {
        return Err(GradedError::SplittingUndetermined);
    }
    let mut twists = Vec::new();
    let mut prev = 0i64;
    for (i, &dv) in diffs.iter().enumerate() {
        let jump = dv - prev;
        if jump < 0 {
            return Err(GradedError::SplittingUndetermined);
        }
        let d = h[i + 1].0;
        for _ in 0..jump {
            twists.push(-d);
        }
        prev = dv;
    }
    let st = SplittingType::new(twists);
    for &(d, hd) in h {
        let want: i64 = st.twists.iter().map(|a| (d + a + 1).max(0)).sum();
        if want != hd as i64 {
            return Err(GradedError::SplittingUndetermined);
        }
    }
    Ok(st)
}
