//! The filtration sheaves F_i attached to a module's global operator:
//! F_i = (Ker int Im^{i-1}) / (Ker int Im^i) as sheaves on the projective
//! line, computed through saturated graded submodules.
//!
//! The intersections come for free from the identity
//! Ker Theta int Im Theta^j = Theta^j (Ker Theta^{j+1}), so each F_i needs
//! only the (free, certified) kernels of two powers of Theta.  All work
//! happens in coordinates relative to the free basis of Ker Theta, which
//! keeps the per-degree linear algebra small.

use thiserror::Error;

use crate::field::Field;
use crate::graded::{
    graded_kernel, saturate, splitting_from_hilbert, submodule_from_generators, GradedError,
    GradedKernel, GradedSubmodule, SplittingType,
};
use crate::matrix::Matrix;
use crate::nullcone::{jordan_profile, NullconeError};
use crate::partition::Partition;
use crate::sl2::Sl2Module;
use crate::theta::{build_theta, theta_power, HomMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FiError {
    #[error("layer index {0} must lie in 1..=p = {1}")]
    BadIndex(usize, usize),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Nullcone(#[from] NullconeError),
    #[error("rank of F_{0} not determined inside the degree window")]
    RankUndetermined(usize),
}

/// Hilbert data and (when the window suffices) splitting type of one F_i.
#[derive(Clone, Debug)]
pub struct FiData {
    pub i: usize,
    /// Section dimensions per degree over the certified window.
    pub hilbert: Vec<(i64, usize)>,
    pub splitting: Option<SplittingType>,
}

impl FiData {
    /// Rank of the sheaf, read off as the stabilized first difference of the
    /// Hilbert data.
    pub fn rank(&self) -> Option<usize> {
        let h = &self.hilbert;
        if h.len() < 3 {
            return None;
        }
        let d1 = h[h.len() - 1].1 as i64 - h[h.len() - 2].1 as i64;
        let d2 = h[h.len() - 2].1 as i64 - h[h.len() - 3].1 as i64;
        if d1 == d2 && d1 >= 0 {
            Some(d1 as usize)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.hilbert.iter().all(|&(_, h)| h == 0)
    }
}

/// Degree bound comfortably past the regularity of everything involved.
pub fn default_degree_bound<K: Field>(m: &Sl2Module<K>) -> i64 {
    (2 * m.dim() + 2 * m.p() as usize) as i64
}

/// The ambient vector s^a t^b v for a degree-d component vector v of the
/// untwisted free module R^n, where a + b = extra.
fn monomial_multiple<K: Field>(
    field: &K,
    n: usize,
    d: i64,
    v: &[K::El],
    t_exp: usize,
    extra: usize,
) -> Vec<K::El> {
    let twists = vec![0i64; n];
    let mut cur = v.to_vec();
    let mut deg = d;
    for step in 0..extra {
        let shift = if step < t_exp { 1 } else { 0 };
        cur = crate::graded::mul_component(field, &twists, deg, &cur, shift);
        deg += 1;
    }
    cur
}

/// Columns: all monomial multiples of the kernel generators landing in
/// ambient degree d, ordered by (generator, t-exponent).  This is the
/// degree-d piece of the free cover (+)_k R(-m_k) -> R^n, which is injective
/// because the generators form a free basis.
fn free_cover_matrix<K: Field>(
    field: &K,
    n: usize,
    ker: &GradedKernel<K>,
    d: i64,
) -> Matrix<K> {
    let mut cols: Vec<Vec<K::El>> = Vec::new();
    for (m_k, g) in &ker.generators {
        let len = d - m_k + 1;
        for kk in 0..len.max(0) as usize {
            cols.push(monomial_multiple(field, n, *m_k, g, kk, (len - 1) as usize));
        }
    }
    let rows = n * (d as usize + 1);
    Matrix::from_fn(field, rows, cols.len(), |i, j| cols[j][i].clone())
}

/// Rewrites ambient-degree-d vectors lying in Ker Theta as coordinate vectors
/// over the free basis of the kernel.
fn to_kernel_coordinates<K: Field>(
    field: &K,
    n: usize,
    ker: &GradedKernel<K>,
    gens: &[(i64, Vec<K::El>)],
) -> Vec<(i64, Vec<K::El>)> {
    let mut out = Vec::with_capacity(gens.len());
    let mut cover: Option<(i64, Matrix<K>)> = None;
    for (d, v) in gens {
        if cover.as_ref().map(|(cd, _)| cd != d).unwrap_or(true) {
            cover = Some((*d, free_cover_matrix(field, n, ker, *d)));
        }
        let coords = cover
            .as_ref()
            .unwrap()
            .1
            .solve(field, v)
            .expect("vector must lie in the kernel");
        out.push((*d, coords));
    }
    out
}

/// Generators of Theta^j(Ker Theta^{j+1}) in ambient R^n coordinates; for
/// j = 0 this is Ker Theta itself.
fn intersection_generators<K: Field>(
    m: &Sl2Module<K>,
    ker1: &GradedKernel<K>,
    j: usize,
    bound: i64,
) -> Result<Vec<(i64, Vec<K::El>)>, GradedError> {
    if j == 0 {
        return Ok(ker1.generators.clone());
    }
    let f = m.field();
    let p = m.p() as usize;
    if j >= p {
        // Theta^p vanishes identically, so the intersection is zero.
        return Ok(Vec::new());
    }
    let ker_hi = graded_kernel(&theta_power(m, j + 1), bound)?;
    let th_j: HomMatrix<K> = theta_power(m, j);
    let mut out = Vec::new();
    for (d, g) in &ker_hi.generators {
        let v = th_j.linear_component(*d as usize).mul_vec(f, g);
        if v.iter().any(|c| !f.is_zero(c)) {
            out.push((d + 2 * j as i64, v));
        }
    }
    Ok(out)
}

/// Saturated graded model of Ker int Im^j, in kernel coordinates; also
/// returns the top degree the saturation certifies.
fn saturated_intersection<K: Field>(
    m: &Sl2Module<K>,
    ker1: &GradedKernel<K>,
    j: usize,
    bound: i64,
) -> Result<(GradedSubmodule<K>, i64), FiError> {
    let f = m.field();
    let n = m.dim();
    let ambient = intersection_generators(m, ker1, j, bound)?;
    let coords = to_kernel_coordinates(f, n, ker1, &ambient);
    let twists = ker1.generator_degrees();
    let sub = submodule_from_generators(f, &twists, &coords, bound);
    let (sat, valid) = saturate(&sub, (bound + 2) as usize)?;
    Ok((sat, valid))
}

/// Hilbert data and splitting type of F_i(M) for 1 <= i <= p.
pub fn fi_data<K: Field>(m: &Sl2Module<K>, i: usize, bound: i64) -> Result<FiData, FiError> {
    let p = m.p() as usize;
    if i < 1 || i > p {
        return Err(FiError::BadIndex(i, p));
    }
    let f = m.field();
    let ker1 = graded_kernel(&build_theta(m), bound)?;
    let (a_sat, va) = saturated_intersection(m, &ker1, i - 1, bound)?;
    let (b_sat, vb) = saturated_intersection(m, &ker1, i, bound)?;
    let valid = va.min(vb);
    let mut hilbert = Vec::new();
    // Subsheaves of Ker Theta have non-positive twists, so sections vanish in
    // degree -1 and the window satisfies the reconstruction precondition.
    for d in -1..=valid {
        let (ha, hb) = (a_sat.dim_at(d), b_sat.dim_at(d));
        assert!(hb <= ha, "lower filtration layer exceeds the higher one");
        hilbert.push((d, ha - hb));
    }
    let _ = f;
    let splitting = splitting_from_hilbert(&hilbert).ok();
    Ok(FiData {
        i,
        hilbert,
        splitting,
    })
}

/// Checks that the generic Jordan type of M is [p]^{a_p} ... [1]^{a_1} with
/// a_i the rank of F_i(M); returns the pair (assembled, generic) on success.
pub fn verify_fi_rank_theorem<K: Field>(
    m: &Sl2Module<K>,
    bound: i64,
    ext_bound: usize,
) -> Result<(Partition, Partition), FiError> {
    let p = m.p() as usize;
    let mut parts = Vec::new();
    for i in 1..=p {
        let data = fi_data(m, i, bound)?;
        let rank = data.rank().ok_or(FiError::RankUndetermined(i))?;
        parts.extend(std::iter::repeat(i).take(rank));
    }
    let assembled = Partition::from_unsorted(parts);
    let generic = jordan_profile(m, ext_bound)?.generic.clone();
    if assembled == generic {
        Ok((assembled, generic))
    } else {
        Err(FiError::RankUndetermined(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::sl2::{dual_weyl, phi, projective, weyl};
    use crate::nullcone::PointP1;

    fn f(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }

    #[test]
    fn fi_of_small_weyl_concentrates_at_lambda_plus_one() {
        // For lambda < p, F_i(V(lambda)) is O(-lambda) when i = lambda + 1
        // and zero otherwise.
        let k = f(5);
        for lambda in 0..5usize {
            let m = weyl(&k, lambda);
            let bound = default_degree_bound(&m);
            for i in 1..=5usize {
                let data = fi_data(&m, i, bound).unwrap();
                if i == lambda + 1 {
                    let st = data.splitting.expect("window should determine the type");
                    assert_eq!(st.twists(), &[-(lambda as i64)], "lambda={lambda} i={i}");
                } else {
                    assert!(data.is_zero(), "lambda={lambda} i={i}");
                }
            }
        }
    }

    #[test]
    fn fi_ranks_assemble_generic_jordan_type() {
        let k = f(3);
        let modules = vec![
            weyl(&k, 4),
            weyl(&k, 7),
            dual_weyl(&k, 5),
            projective(&k, 1).unwrap(),
            phi(&k, 4, &PointP1::Finite(2)).unwrap(),
        ];
        for m in modules {
            let bound = default_degree_bound(&m);
            let (assembled, generic) = verify_fi_rank_theorem(&m, bound, 6).unwrap();
            assert_eq!(assembled, generic, "{}", m.label().describe());
        }
    }

    #[test]
    fn fi_rejects_out_of_range_layer() {
        let k = f(3);
        let m = weyl(&k, 2);
        assert!(matches!(fi_data(&m, 0, 10), Err(FiError::BadIndex(0, 3))));
        assert!(matches!(fi_data(&m, 4, 10), Err(FiError::BadIndex(4, 3))));
    }

    #[test]
    fn top_layer_rank_counts_full_blocks() {
        // F_p has rank = number of parts equal to p in the generic type.
        let k = f(3);
        let m = weyl(&k, 5); // generic type [3][3] at p = 3
        let data = fi_data(&m, 3, default_degree_bound(&m)).unwrap();
        assert_eq!(data.rank(), Some(2));
    }
}
