//! Heller shifts of Weyl modules: the kernel of the projective cover
//! Q(a)^{r+1} -> V(lambda), constructed explicitly and identified with
//! V((r+2)p - a - 2).
//!
//! Writing lambda = rp + a with 0 <= a < p, the cover restricted to the q-th
//! summand sends v_i and w_i to multiples of v_{(q-1)p + a + i + 1} (indices
//! outside 0..=lambda meaning zero).  The kernel has the explicit basis
//! v'_{qp+b} below; everything is re-verified against the actual nullspace
//! before the module structure is read off.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::Field;
use crate::matrix::Matrix;
use crate::sl2::{
    binom_mod, hom_space, projective, weyl, Family, Label, ModuleHom, Sl2Error, Sl2Module,
};

#[derive(Debug, Error)]
pub enum HellerError {
    #[error(transparent)]
    Sl2(#[from] Sl2Error),
    #[error("projective cover construction failed: {0}")]
    BadCover(&'static str),
    #[error("no isomorphism found between the cover kernel and the expected Weyl module")]
    NoIsomorphism,
}

/// Heller shift of V(lambda) with all certificates: the cover, the covering
/// map, the kernel with its module structure, and an explicit isomorphism
/// onto V(omega_lambda).
pub struct HellerData<K: Field> {
    pub lambda: usize,
    pub omega_lambda: usize,
    pub cover: Sl2Module<K>,
    /// Surjection cover -> V(lambda).
    pub cover_map: ModuleHom<K>,
    /// Kernel of the cover map with the restricted action.
    pub kernel: Sl2Module<K>,
    /// Columns: the kernel basis inside the cover.
    pub kernel_basis: Matrix<K>,
    /// Isomorphism kernel -> V(omega_lambda).
    pub iso: ModuleHom<K>,
}

/// The projective cover Q(a)^{r+1} -> V(lambda) for lambda = rp + a with
/// a != p - 1, verified to be a surjective module homomorphism.
pub fn projective_cover<K: Field>(
    field: &K,
    lambda: usize,
) -> Result<(Sl2Module<K>, ModuleHom<K>), HellerError> {
    let p = field.char() as usize;
    let (r, a) = (lambda / p, lambda % p);
    assert!(a != p - 1, "V(lambda) is projective when a = p - 1");
    let q_a = projective(field, a)?;
    let mut cover = q_a.clone();
    for _ in 1..=r {
        cover = cover.direct_sum(&q_a);
    }
    let target = weyl(field, lambda);
    // Summand q occupies columns q*2p..(q+1)*2p; within a summand the basis
    // is v_0..v_{2p-a-2} followed by w_{p-a-1}..w_{p-1}.
    let v_count = 2 * p - a - 1;
    let vcol = |q: usize, i: usize| q * 2 * p + i;
    let wcol = |q: usize, i: usize| q * 2 * p + v_count + (i - (p - a - 1));
    let (ai, pi) = (a as i64, p as i64);
    let mut fmat = Matrix::zero(field, lambda + 1, 2 * p * (r + 1));
    for q in 0..=r {
        let tgt = |i: usize| -> Option<usize> {
            let t = (q as i64 - 1) * pi + ai + i as i64 + 1;
            (0..=lambda as i64).contains(&t).then_some(t as usize)
        };
        for i in 0..=(p - a - 2) {
            if let Some(row) = tgt(i) {
                let c = field.mul(
                    &field.from_int(-(ai + 1) * (ai + 1)),
                    &binom_mod(field, (p - i - 1) as i64, ai + 1),
                );
                fmat.set(row, vcol(q, i), c);
            }
        }
        for i in p..=(2 * p - a - 2) {
            if let Some(row) = tgt(i) {
                let sign = if (a + 1) % 2 == 0 { 1 } else { -1 };
                let c = field.mul(
                    &field.from_int(sign * (ai + 1) * (ai + 1)),
                    &binom_mod(field, (i + a + 1 - p) as i64, ai + 1),
                );
                fmat.set(row, vcol(q, i), c);
            }
        }
        for i in (p - a - 1)..=(p - 1) {
            if let Some(row) = tgt(i) {
                let sign = field.from_int(if (i + a) % 2 == 0 { 1 } else { -1 });
                let b = binom_mod(field, ai, (i + a + 1 - p) as i64);
                let c = field.mul(&sign, &field.inv(&b).expect("binomial of args < p"));
                fmat.set(row, wcol(q, i), c);
            }
        }
    }
    let hom = ModuleHom {
        source: cover.clone(),
        target,
        matrix: fmat,
    };
    if !hom.verify() {
        return Err(HellerError::BadCover("map does not intertwine the actions"));
    }
    if hom.matrix.rank(field) != lambda + 1 {
        return Err(HellerError::BadCover("map is not surjective"));
    }
    Ok((cover, hom))
}

/// Omega V(lambda).  Returns None when V(lambda) is projective (a = p - 1),
/// where the shift vanishes.
pub fn heller_shift<K: Field>(
    field: &K,
    lambda: usize,
) -> Result<Option<HellerData<K>>, HellerError> {
    let p = field.char() as usize;
    let (r, a) = (lambda / p, lambda % p);
    if a == p - 1 {
        return Ok(None);
    }
    let (cover, cover_map) = projective_cover(field, lambda)?;
    let ker_dim = (r + 2) * p - a - 1;
    let vcol = |q: usize, i: usize| q * 2 * p + i;
    // Explicit kernel basis v'_{qp+b}: the q = 0 summand contributes its v_i
    // outright (their images have out-of-range or vanishing targets), middle
    // summands pair v_{q,b} with v_{q-1,p+b}, and the leftover tail consists
    // of the unpaired v_{r,p+b}.
    let mut basis = Matrix::zero(field, cover.dim(), ker_dim);
    for idx in 0..ker_dim {
        let (q, b) = (idx / p, idx % p);
        if q == 0 {
            basis.set(vcol(0, b), idx, field.one());
        } else if q <= r {
            basis.set(vcol(q, b), idx, field.one());
            if b <= p - a - 2 {
                basis.set(vcol(q - 1, p + b), idx, field.one());
            }
        } else {
            basis.set(vcol(r, p + b), idx, field.one());
        }
    }
    // Certify: columns are independent, killed by the cover map, and exhaust
    // the nullspace.
    if basis.rank(field) != ker_dim {
        return Err(HellerError::BadCover("kernel basis is dependent"));
    }
    if !cover_map.matrix.mul(field, &basis).is_zero(field) {
        return Err(HellerError::BadCover("kernel basis not killed by the cover map"));
    }
    if cover_map.matrix.nullspace(field).len() != ker_dim {
        return Err(HellerError::BadCover("kernel dimension mismatch"));
    }
    // Restrict the cover action to the kernel: solve basis * y = X * column.
    let restrict = |x: &Matrix<K>| -> Result<Matrix<K>, HellerError> {
        let mut out = Matrix::zero(field, ker_dim, ker_dim);
        for j in 0..ker_dim {
            let col: Vec<K::El> = (0..cover.dim()).map(|i| basis.get(i, j).clone()).collect();
            let image = x.mul_vec(field, &col);
            let y = basis
                .solve(field, &image)
                .ok_or(HellerError::BadCover("kernel is not invariant"))?;
            for (i, v) in y.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Ok(out)
    };
    let omega_lambda = (r + 2) * p - a - 2;
    let kernel = Sl2Module::from_actions(
        field.clone(),
        restrict(cover.e())?,
        restrict(cover.f())?,
        restrict(cover.h())?,
        Label {
            family: Family::Other,
            lambda: Some(lambda),
            xi: None,
        },
    );
    kernel.validate()?;
    let w = weyl(field, omega_lambda);
    let iso = if kernel.e() == w.e() && kernel.f() == w.f() && kernel.h() == w.h() {
        ModuleHom {
            source: kernel.clone(),
            target: w,
            matrix: Matrix::identity(field, ker_dim),
        }
    } else {
        find_isomorphism(&kernel, &w).ok_or(HellerError::NoIsomorphism)?
    };
    Ok(Some(HellerData {
        lambda,
        omega_lambda,
        cover,
        cover_map,
        kernel,
        kernel_basis: basis,
        iso,
    }))
}

/// Searches Hom(m, n) for an isomorphism: each basis element first, then
/// seeded random combinations.
pub fn find_isomorphism<K: Field>(m: &Sl2Module<K>, n: &Sl2Module<K>) -> Option<ModuleHom<K>> {
    if m.dim() != n.dim() {
        return None;
    }
    let k = m.field().clone();
    let homs = hom_space(m, n);
    for h in &homs {
        if h.is_isomorphism() {
            return Some(h.clone());
        }
    }
    if homs.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x0E11E12);
    for _ in 0..64 {
        let mut acc = Matrix::zero(&k, n.dim(), m.dim());
        for h in &homs {
            let c = k.sample(&mut rng);
            acc = acc.add(&k, &h.matrix.scale(&k, &c));
        }
        let cand = ModuleHom {
            source: m.clone(),
            target: n.clone(),
            matrix: acc,
        };
        if cand.is_isomorphism() {
            let _ = rng.random::<u64>();
            return Some(cand);
        }
    }
    None
}
