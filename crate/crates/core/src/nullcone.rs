//! The projective line inside the restricted nullcone of sl2, nilpotent
//! operators at its points, and local Jordan type profiles.
//!
//! A point [s:t] maps to the nullcone element (x, y, z) = (s^2, -t^2, st),
//! which satisfies xy + z^2 = 0; the operator at the point is xE + yF + zH.
//! Rank drops of powers of the symbolic operator at [1:u] are confined to
//! the vanishing locus of any nonzero maximal minor, which yields a complete
//! candidate list for exceptional points.

use thiserror::Error;

use crate::field::{Ext, Field};
use crate::matrix::{generic_rank_minor, Matrix};
use crate::partition::{jordan_type_from_ranks, Partition};
use crate::poly::{irreducible_factors, Poly};
use crate::sl2::Sl2Module;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NullconeError {
    #[error("both coordinates zero is not a point of P^1")]
    ZeroPoint,
    #[error(
        "profile incomplete: exceptional candidate needs extension degree {needed} > bound {bound} (factor {factor})"
    )]
    ProfileIncomplete {
        needed: usize,
        bound: usize,
        factor: String,
    },
    #[error("rank sequence at a point was not realizable: {0}")]
    BadRanks(String),
}

/// A point of P^1, normalized to [1:t] or [0:1].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum PointP1<K: Field> {
    /// [1:t]
    Finite(K::El),
    /// [0:1]
    Infinity,
}

impl<K: Field> PointP1<K> {
    pub fn from_coords(field: &K, s: &K::El, t: &K::El) -> Result<PointP1<K>, NullconeError> {
        if !field.is_zero(s) {
            let inv = field.inv(s).unwrap();
            Ok(PointP1::Finite(field.mul(t, &inv)))
        } else if !field.is_zero(t) {
            Ok(PointP1::Infinity)
        } else {
            Err(NullconeError::ZeroPoint)
        }
    }

    pub fn coords(&self, field: &K) -> (K::El, K::El) {
        match self {
            PointP1::Finite(t) => (field.one(), t.clone()),
            PointP1::Infinity => (field.zero(), field.one()),
        }
    }

    pub fn describe(&self, field: &K) -> String {
        match self {
            PointP1::Finite(t) => format!("[1:{}]", field.fmt_el(t)),
            PointP1::Infinity => "[0:1]".to_string(),
        }
    }
}

/// (x, y, z) with xy + z^2 = 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NullconeElement<K: Field> {
    pub x: K::El,
    pub y: K::El,
    pub z: K::El,
}

/// [s:t] -> (s^2, -t^2, st).
pub fn iota<K: Field>(field: &K, pt: &PointP1<K>) -> NullconeElement<K> {
    let (s, t) = pt.coords(field);
    NullconeElement {
        x: field.mul(&s, &s),
        y: field.neg(&field.mul(&t, &t)),
        z: field.mul(&s, &t),
    }
}

/// The nilpotent operator xE + yF + zH at the image of pt.
pub fn operator_at<K: Field>(m: &Sl2Module<K>, pt: &PointP1<K>) -> Matrix<K> {
    let k = m.field();
    let NullconeElement { x, y, z } = iota(k, pt);
    m.e()
        .scale(k, &x)
        .add(k, &m.f().scale(k, &y))
        .add(k, &m.h().scale(k, &z))
}

fn ranks_of_powers<K: Field>(field: &K, a: &Matrix<K>, p: usize) -> Vec<usize> {
    let mut ranks = Vec::with_capacity(p - 1);
    let mut pw = a.clone();
    for j in 1..p {
        let rank = if j == 1 || ranks[j - 2] > 0 {
            pw.rank(field)
        } else {
            0
        };
        ranks.push(rank);
        if j < p - 1 {
            pw = pw.mul(field, a);
        }
    }
    ranks
}

pub fn local_jordan_type<K: Field>(m: &Sl2Module<K>, pt: &PointP1<K>) -> Partition {
    let k = m.field();
    let a = operator_at(m, pt);
    let ranks = ranks_of_powers(k, &a, m.p() as usize);
    jordan_type_from_ranks(m.dim(), &ranks).expect("nullcone operators are p-nilpotent")
}

/// j-rank at a point: rank of the j-th power of the local operator.
pub fn local_j_rank<K: Field>(m: &Sl2Module<K>, pt: &PointP1<K>, j: usize) -> usize {
    local_jordan_type(m, pt).j_rank(j)
}

/// An exceptional point, possibly living in an extension of the module's
/// field of definition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ProfilePoint<K: Field> {
    Rational(PointP1<K>),
    /// [1:u] in K[u]/(modulus), modulus irreducible of degree >= 2.
    Extension { modulus: Vec<K::El> },
}

impl<K: Field> ProfilePoint<K> {
    pub fn describe(&self, field: &K) -> String {
        match self {
            ProfilePoint::Rational(pt) => pt.describe(field),
            ProfilePoint::Extension { modulus } => {
                let p = Poly::new(field, modulus.clone());
                format!("[1:u] with {} = 0", p.to_string(field, "u"))
            }
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct JordanTypeProfile<K: Field> {
    pub generic: Partition,
    pub exceptional: Vec<(ProfilePoint<K>, Partition)>,
}

impl<K: Field> JordanTypeProfile<K> {
    pub fn is_constant(&self) -> bool {
        self.exceptional.is_empty()
    }
}

fn compute_profile<K: Field>(
    m: &Sl2Module<K>,
    ext_bound: usize,
) -> Result<JordanTypeProfile<K>, NullconeError> {
    let k = m.field();
    let n = m.dim();
    let p = m.p() as usize;
    // Symbolic operator at [1:u]: E - u^2 F + u H over K[u].
    let u = Poly::x(k);
    let u2 = u.mul(k, &u);
    let sym: Vec<Vec<Poly<K>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = Poly::constant(k, m.e().get(i, j).clone());
                    let f = Poly::constant(k, m.f().get(i, j).clone());
                    let h = Poly::constant(k, m.h().get(i, j).clone());
                    e.sub(k, &f.mul(k, &u2)).add(k, &h.mul(k, &u))
                })
                .collect()
        })
        .collect();
    let poly_mul = |a: &Vec<Vec<Poly<K>>>, b: &Vec<Vec<Poly<K>>>| -> Vec<Vec<Poly<K>>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc = Poly::zero();
                        for l in 0..n {
                            acc = acc.add(k, &a[i][l].mul(k, &b[l][j]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    };
    let mut generic_ranks = Vec::with_capacity(p - 1);
    let mut minors: Vec<Poly<K>> = Vec::new();
    let mut pw = sym.clone();
    for j in 1..p {
        let (rank, minor) = if j == 1 || generic_ranks[j - 2] > 0 {
            generic_rank_minor(k, &pw)
        } else {
            (0, Poly::one(k))
        };
        generic_ranks.push(rank);
        minors.push(minor);
        if j < p - 1 && rank > 0 {
            pw = poly_mul(&pw, &sym);
        }
    }
    let generic = jordan_type_from_ranks(n, &generic_ranks)
        .map_err(|e| NullconeError::BadRanks(e.to_string()))?;

    // Candidate exceptional points: roots of any rank-sized minor, plus the
    // point [0:1] outside the chart.
    let mut factors: Vec<Poly<K>> = Vec::new();
    for minor in &minors {
        if minor.degree().map(|d| d >= 1).unwrap_or(false) {
            for (g, _) in irreducible_factors(k, minor).expect("nonzero minor") {
                if g.degree() >= Some(1) && !factors.contains(&g) {
                    factors.push(g);
                }
            }
        }
    }
    let mut exceptional: Vec<(ProfilePoint<K>, Partition)> = Vec::new();
    for g in factors {
        let d = g.degree().unwrap();
        if d == 1 {
            // Monic u + c has root -c.
            let root = k.neg(&g.coeffs()[0]);
            let pt = PointP1::Finite(root);
            let jt = local_jordan_type(m, &pt);
            if jt != generic {
                exceptional.push((ProfilePoint::Rational(pt), jt));
            }
        } else {
            let base_e = k.describe().e;
            let needed = base_e * d;
            if needed > ext_bound {
                return Err(NullconeError::ProfileIncomplete {
                    needed,
                    bound: ext_bound,
                    factor: g.to_string(k, "u"),
                });
            }
            let ext = Ext::new(k.clone(), g.coeffs().to_vec());
            let m_ext = m.extend(&ext, |c| ext.embed(c));
            let pt = PointP1::Finite(ext.generator());
            let jt = local_jordan_type(&m_ext, &pt);
            if jt != generic {
                exceptional.push((
                    ProfilePoint::Extension {
                        modulus: g.coeffs().to_vec(),
                    },
                    jt,
                ));
            }
        }
    }
    let jt_inf = local_jordan_type(m, &PointP1::Infinity);
    if jt_inf != generic {
        exceptional.push((ProfilePoint::Rational(PointP1::Infinity), jt_inf));
    }
    exceptional.sort_by_key(|(pt, _)| pt.describe(k));
    Ok(JordanTypeProfile {
        generic,
        exceptional,
    })
}

/// Generic-plus-exceptional Jordan type profile; cached per module on
/// success.  ext_bound limits the absolute degree of extension fields
/// explored for irrational candidate points.
pub fn jordan_profile<K: Field>(
    m: &Sl2Module<K>,
    ext_bound: usize,
) -> Result<JordanTypeProfile<K>, NullconeError> {
    if let Some(profile) = m.profile_cache().get() {
        if let Ok(p) = profile {
            return Ok(p.clone());
        }
    }
    let computed = compute_profile(m, ext_bound)?;
    let _ = m.profile_cache().set(Ok(computed.clone()));
    Ok(computed)
}

pub fn has_constant_jordan_type<K: Field>(
    m: &Sl2Module<K>,
    ext_bound: usize,
) -> Result<bool, NullconeError> {
    Ok(jordan_profile(m, ext_bound)?.is_constant())
}

/// Projective iff constant Jordan type [p]^{dim/p}.
pub fn is_projective<K: Field>(m: &Sl2Module<K>, ext_bound: usize) -> Result<bool, NullconeError> {
    let profile = jordan_profile(m, ext_bound)?;
    let p = m.p() as usize;
    let full = m.dim() % p == 0
        && profile.generic.parts().len() == m.dim() / p
        && profile.generic.parts().iter().all(|&x| x == p);
    Ok(profile.is_constant() && full)
}
