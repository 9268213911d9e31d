//! Exact arithmetic over prime fields `F_p` and finite extensions `F_{p^e}`.
//!
//! Fields are runtime values (the prime and the modulus are data, not type
//! parameters), so elements do not know their field; every operation takes the
//! field as context.  Extensions are quotients `K[u]/(m)` over an arbitrary
//! base field `K`, which lets exceptional-locus analysis climb into towers
//! when an irreducible factor lives over an already-extended field.

use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not an odd prime >= 3")]
    BadPrime(u64),
    #[error("modulus of degree {0} is not irreducible")]
    ReducibleModulus(usize),
    #[error("division by zero")]
    DivisionByZero,
}

/// A finite field given as a runtime value.  Elements are plain data; all
/// arithmetic goes through the field object.
pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    type El: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    /// Characteristic p.
    fn char(&self) -> u64;
    /// Number of elements, p^e.
    fn order(&self) -> u128;
    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn inv(&self, a: &Self::El) -> Result<Self::El, FieldError>;
    /// Image of the integer n under Z -> F.
    fn from_int(&self, n: i64) -> Self::El;
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::El;
    fn fmt_el(&self, a: &Self::El) -> String;

    fn div(&self, a: &Self::El, b: &Self::El) -> Result<Self::El, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn pow(&self, a: &Self::El, mut n: u128) -> Self::El {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// All field elements, in a canonical order.  Only call on small fields.
    fn elements(&self) -> Vec<Self::El>;

    /// Degree over the prime field and the top-level modulus, for reports.
    fn describe(&self) -> FieldDesc;
}

/// Serializable description of a finite field: F_{p^e}, with the modulus of
/// the top extension step rendered over its base field (empty for F_p).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u64,
    pub e: usize,
    pub modulus: Vec<String>,
}

/// The prime field F_p for an odd prime p >= 3.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Result<Fp, FieldError> {
        if p < 3 || !is_prime(p) {
            return Err(FieldError::BadPrime(p));
        }
        Ok(Fp { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for Fp {
    type El = u64;

    fn char(&self) -> u64 {
        self.p
    }
    fn order(&self) -> u128 {
        self.p as u128
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (((*a as u128) * (*b as u128)) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> Result<u64, FieldError> {
        if *a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        // Fermat; p is small enough that this beats extended gcd bookkeeping.
        Ok(self.pow(a, (self.p - 2) as u128))
    }
    fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.random_range(0..self.p)
    }
    fn fmt_el(&self, a: &u64) -> String {
        a.to_string()
    }
    fn elements(&self) -> Vec<u64> {
        (0..self.p).collect()
    }
    fn describe(&self) -> FieldDesc {
        FieldDesc {
            p: self.p,
            e: 1,
            modulus: vec![],
        }
    }
}

/// The extension `K[u]/(modulus)`.  Elements are coefficient vectors of
/// length `deg(modulus)`, low degree first.
#[derive(Clone, PartialEq, Debug)]
pub struct Ext<K: Field> {
    base: K,
    /// Monic irreducible modulus, low degree first, length e + 1.
    modulus: Vec<K::El>,
}

impl<K: Field> Ext<K> {
    /// Builds `K[u]/(modulus)`.  The modulus must be monic and irreducible
    /// over K; irreducibility is the caller's responsibility when the modulus
    /// comes from a factorization (factors are irreducible by construction).
    pub fn new(base: K, modulus: Vec<K::El>) -> Ext<K> {
        assert!(modulus.len() >= 2, "modulus must have degree >= 1");
        assert!(
            modulus.last().map(|c| c == &base.one()).unwrap_or(false),
            "modulus must be monic"
        );
        Ext { base, modulus }
    }

    pub fn base(&self) -> &K {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[K::El] {
        &self.modulus
    }

    /// The class of u, a root of the modulus.
    pub fn generator(&self) -> Vec<K::El> {
        let mut v = vec![self.base.zero(); self.degree()];
        if self.degree() == 1 {
            // u = -m_0 in degree one.
            v[0] = self.base.neg(&self.modulus[0]);
        } else {
            v[1] = self.base.one();
        }
        v
    }

    pub fn embed(&self, a: &K::El) -> Vec<K::El> {
        let mut v = vec![self.base.zero(); self.degree()];
        v[0] = a.clone();
        v
    }

    /// Coefficients of an element in the power basis 1, u, ..., u^{e-1}.
    pub fn coords<'a>(&self, a: &'a [K::El]) -> &'a [K::El] {
        a
    }

    fn reduce(&self, mut c: Vec<K::El>) -> Vec<K::El> {
        let e = self.degree();
        while c.len() > e {
            let top = c.pop().unwrap();
            if !self.base.is_zero(&top) {
                let k = c.len() - e;
                for i in 0..e {
                    let t = self.base.mul(&top, &self.modulus[i]);
                    c[k + i] = self.base.sub(&c[k + i], &t);
                }
            }
        }
        c.resize(e, self.base.zero());
        c
    }
}

impl<K: Field> Field for Ext<K> {
    type El = Vec<K::El>;

    fn char(&self) -> u64 {
        self.base.char()
    }
    fn order(&self) -> u128 {
        self.base.order().pow(self.degree() as u32)
    }
    fn zero(&self) -> Vec<K::El> {
        vec![self.base.zero(); self.degree()]
    }
    fn one(&self) -> Vec<K::El> {
        let mut v = self.zero();
        v[0] = self.base.one();
        v
    }
    fn is_zero(&self, a: &Vec<K::El>) -> bool {
        a.iter().all(|c| self.base.is_zero(c))
    }
    fn add(&self, a: &Vec<K::El>, b: &Vec<K::El>) -> Vec<K::El> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<K::El>, b: &Vec<K::El>) -> Vec<K::El> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn neg(&self, a: &Vec<K::El>) -> Vec<K::El> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<K::El>, b: &Vec<K::El>) -> Vec<K::El> {
        let e = self.degree();
        let mut c = vec![self.base.zero(); 2 * e - 1];
        for (i, x) in a.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = self.base.mul(x, y);
                c[i + j] = self.base.add(&c[i + j], &t);
            }
        }
        self.reduce(c)
    }
    fn inv(&self, a: &Vec<K::El>) -> Result<Vec<K::El>, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        // a^(q-2) with q = order; valid since the modulus is irreducible.
        Ok(self.pow(a, self.order() - 2))
    }
    fn from_int(&self, n: i64) -> Vec<K::El> {
        self.embed(&self.base.from_int(n))
    }
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<K::El> {
        (0..self.degree()).map(|_| self.base.sample(rng)).collect()
    }
    fn fmt_el(&self, a: &Vec<K::El>) -> String {
        let terms: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.base.is_zero(c))
            .map(|(i, c)| {
                let coeff = self.base.fmt_el(c);
                match (i, coeff == "1") {
                    (0, _) => coeff,
                    (1, true) => "u".to_string(),
                    (1, false) => format!("{coeff}*u"),
                    (_, true) => format!("u^{i}"),
                    (_, false) => format!("{coeff}*u^{i}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
    fn elements(&self) -> Vec<Vec<K::El>> {
        let base_els = self.base.elements();
        let mut out: Vec<Vec<K::El>> = vec![vec![]];
        for _ in 0..self.degree() {
            let mut next = Vec::with_capacity(out.len() * base_els.len());
            for prefix in &out {
                for c in &base_els {
                    let mut v = prefix.clone();
                    v.push(c.clone());
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }
    fn describe(&self) -> FieldDesc {
        FieldDesc {
            p: self.char(),
            e: self.base.describe().e * self.degree(),
            modulus: self.modulus.iter().map(|c| self.base.fmt_el(c)).collect(),
        }
    }
}

/// Frobenius x -> x^p.
pub fn frobenius<K: Field>(field: &K, a: &K::El) -> K::El {
    field.pow(a, field.char() as u128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_two_and_composites() {
        assert!(Fp::new(2).is_err());
        assert!(Fp::new(9).is_err());
        assert!(Fp::new(1).is_err());
        assert!(Fp::new(5).is_ok());
    }

    #[test]
    fn fp_arithmetic() {
        let f = Fp::new(7).unwrap();
        assert_eq!(f.add(&5, &4), 2);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3).unwrap(), 5);
        assert_eq!(f.from_int(-1), 6);
        assert_eq!(f.inv(&0), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn ext_field_is_a_field() {
        // F_9 = F_3[u]/(u^2 + 1).
        let f3 = Fp::new(3).unwrap();
        let f9 = Ext::new(f3, vec![1, 0, 1]);
        assert_eq!(f9.order(), 9);
        let u = f9.generator();
        // u^2 = -1 = 2.
        assert_eq!(f9.mul(&u, &u), f9.from_int(2));
        for a in f9.elements() {
            if f9.is_zero(&a) {
                continue;
            }
            let inv = f9.inv(&a).unwrap();
            assert_eq!(f9.mul(&a, &inv), f9.one());
        }
    }

    #[test]
    fn frobenius_is_automorphism_fixing_fp() {
        let f3 = Fp::new(3).unwrap();
        let f9 = Ext::new(f3, vec![1, 0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = f9.sample(&mut rng);
            let b = f9.sample(&mut rng);
            let fr = |x: &Vec<u64>| frobenius(&f9, x);
            assert_eq!(fr(&f9.add(&a, &b)), f9.add(&fr(&a), &fr(&b)));
            assert_eq!(fr(&f9.mul(&a, &b)), f9.mul(&fr(&a), &fr(&b)));
        }
        // Fixed points are exactly F_3.
        let fixed: Vec<_> = f9
            .elements()
            .into_iter()
            .filter(|a| frobenius(&f9, a) == *a)
            .collect();
        assert_eq!(fixed.len(), 3);
        assert!(fixed.iter().all(|a| f9.base().is_zero(&a[1])));
    }
}
