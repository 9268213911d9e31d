//! Univariate polynomials over a finite field, with the factorization
//! machinery used to locate exceptional points on the projective line.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{Ext, Field, Fp};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("cannot factor the zero polynomial")]
    ZeroPolynomial,
}

/// Dense univariate polynomial, low degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<K: Field> {
    coeffs: Vec<K::El>,
}

impl<K: Field> Poly<K> {
    pub fn new(field: &K, mut coeffs: Vec<K::El>) -> Poly<K> {
        while coeffs.last().map(|c| field.is_zero(c)).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly<K> {
        Poly { coeffs: vec![] }
    }

    pub fn constant(field: &K, c: K::El) -> Poly<K> {
        Poly::new(field, vec![c])
    }

    pub fn one(field: &K) -> Poly<K> {
        Poly::constant(field, field.one())
    }

    /// The monomial u.
    pub fn x(field: &K) -> Poly<K> {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    pub fn from_ints(field: &K, ints: &[i64]) -> Poly<K> {
        Poly::new(field, ints.iter().map(|n| field.from_int(*n)).collect())
    }

    pub fn coeffs(&self) -> &[K::El] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self, field: &K) -> K::El {
        self.coeffs.last().cloned().unwrap_or_else(|| field.zero())
    }

    pub fn add(&self, field: &K, other: &Poly<K>) -> Poly<K> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(|| field.zero());
            let b = other.coeffs.get(i).cloned().unwrap_or_else(|| field.zero());
            c.push(field.add(&a, &b));
        }
        Poly::new(field, c)
    }

    pub fn sub(&self, field: &K, other: &Poly<K>) -> Poly<K> {
        self.add(field, &other.neg(field))
    }

    pub fn neg(&self, field: &K) -> Poly<K> {
        Poly {
            coeffs: self.coeffs.iter().map(|c| field.neg(c)).collect(),
        }
    }

    pub fn mul(&self, field: &K, other: &Poly<K>) -> Poly<K> {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = field.mul(a, b);
                c[i + j] = field.add(&c[i + j], &t);
            }
        }
        Poly::new(field, c)
    }

    pub fn scale(&self, field: &K, c: &K::El) -> Poly<K> {
        Poly::new(field, self.coeffs.iter().map(|a| field.mul(a, c)).collect())
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn div_rem(&self, field: &K, divisor: &Poly<K>) -> (Poly<K>, Poly<K>) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        let lead_inv = field.inv(&divisor.leading(field)).expect("nonzero leading");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![field.zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = field.mul(&rem[k], &lead_inv);
            if field.is_zero(&c) {
                continue;
            }
            quot[k - dd] = c.clone();
            for (i, d) in divisor.coeffs.iter().enumerate() {
                let t = field.mul(&c, d);
                rem[k - dd + i] = field.sub(&rem[k - dd + i], &t);
            }
        }
        (Poly::new(field, quot), Poly::new(field, rem))
    }

    pub fn rem(&self, field: &K, divisor: &Poly<K>) -> Poly<K> {
        self.div_rem(field, divisor).1
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, field: &K, divisor: &Poly<K>) -> Poly<K> {
        let (q, r) = self.div_rem(field, divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self, field: &K) -> Poly<K> {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = field.inv(&self.leading(field)).unwrap();
        self.scale(field, &inv)
    }

    pub fn gcd(&self, field: &K, other: &Poly<K>) -> Poly<K> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(field, &b);
            a = b;
            b = r;
        }
        a.monic(field)
    }

    pub fn derivative(&self, field: &K) -> Poly<K> {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| field.mul(&field.from_int(i as i64), a))
            .collect();
        Poly::new(field, c)
    }

    pub fn eval(&self, field: &K, x: &K::El) -> K::El {
        let mut acc = field.zero();
        for c in self.coeffs.iter().rev() {
            acc = field.add(&field.mul(&acc, x), c);
        }
        acc
    }

    /// self^n mod m.
    pub fn pow_mod(&self, field: &K, mut n: u128, m: &Poly<K>) -> Poly<K> {
        let mut base = self.rem(field, m);
        let mut acc = Poly::one(field);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(field, &base).rem(field, m);
            }
            base = base.mul(field, &base).rem(field, m);
            n >>= 1;
        }
        acc
    }

    pub fn to_string(&self, field: &K, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !field.is_zero(c))
            .map(|(i, c)| {
                let cs = field.fmt_el(c);
                match i {
                    0 => cs,
                    1 if cs == "1" => var.to_string(),
                    1 => format!("{cs}*{var}"),
                    _ if cs == "1" => format!("{var}^{i}"),
                    _ => format!("{cs}*{var}^{i}"),
                }
            })
            .collect();
        terms.join(" + ")
    }
}

/// Monic irreducible factors with multiplicities, in a canonical order.
pub fn irreducible_factors<K: Field>(
    field: &K,
    f: &Poly<K>,
) -> Result<Vec<(Poly<K>, usize)>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut out: Vec<(Poly<K>, usize)> = Vec::new();
    let mut stack = vec![(f.monic(field), 1usize)];
    // Equal-degree splitting is randomized; the fixed seed keeps the whole
    // factorization deterministic.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_FAC7);
    while let Some((g, mult)) = stack.pop() {
        match g.degree() {
            None | Some(0) => continue,
            Some(1) => {
                push_factor(&mut out, g, mult);
                continue;
            }
            _ => {}
        }
        let deriv = g.derivative(field);
        if deriv.is_zero() {
            // g = h(u^p); take p-th roots of the coefficients.
            let p = field.char() as usize;
            let root_exp = field.order() / field.char() as u128;
            let mut c = Vec::new();
            for (i, a) in g.coeffs().iter().enumerate() {
                if i % p == 0 {
                    c.push(field.pow(a, root_exp));
                } else {
                    debug_assert!(field.is_zero(a));
                }
            }
            stack.push((Poly::new(field, c), mult * p));
            continue;
        }
        let gg = g.gcd(field, &deriv);
        // w carries every distinct irreducible factor of g whose multiplicity
        // is prime to p; w is squarefree and non-constant since deriv != 0.
        let w = if gg.degree() == Some(0) {
            g.clone()
        } else {
            g.div_exact(field, &gg)
        };
        let mut rest = g.clone();
        for (q, _) in squarefree_factor(field, &w, &mut rng) {
            let mut m = 0usize;
            loop {
                let (quo, rem) = rest.div_rem(field, &q);
                if rem.is_zero() {
                    rest = quo;
                    m += 1;
                } else {
                    break;
                }
            }
            debug_assert!(m >= 1);
            push_factor(&mut out, q, mult * m);
        }
        // Whatever remains has all multiplicities divisible by p, so its
        // derivative vanishes and the p-th-root branch handles it.
        stack.push((rest, mult));
    }
    out.sort_by(|a, b| cmp_poly::<K>(&a.0, &b.0));
    Ok(out)
}

fn push_factor<K: Field>(out: &mut Vec<(Poly<K>, usize)>, f: Poly<K>, mult: usize) {
    for (g, m) in out.iter_mut() {
        if *g == f {
            *m += mult;
            return;
        }
    }
    out.push((f, mult));
}

fn cmp_poly<K: Field>(a: &Poly<K>, b: &Poly<K>) -> std::cmp::Ordering {
    a.coeffs()
        .len()
        .cmp(&b.coeffs().len())
        .then_with(|| format!("{:?}", a.coeffs()).cmp(&format!("{:?}", b.coeffs())))
}

/// Factors a squarefree monic polynomial: distinct-degree, then
/// Cantor-Zassenhaus equal-degree splitting (char is odd throughout).
fn squarefree_factor<K: Field>(
    field: &K,
    f: &Poly<K>,
    rng: &mut ChaCha8Rng,
) -> Vec<(Poly<K>, usize)> {
    let mut out = Vec::new();
    let q = field.order();
    let x = Poly::x(field);
    let mut rest = f.clone();
    let mut xq = x.clone(); // x^(q^d) mod rest, maintained incrementally
    let mut d = 0usize;
    while rest.degree().map(|n| n > 0).unwrap_or(false) {
        d += 1;
        if rest.degree().unwrap() < 2 * d {
            out.push((rest.clone(), 1));
            break;
        }
        xq = xq.pow_mod(field, q, &rest);
        let diff = xq.sub(field, &x);
        let g = rest.gcd(field, &diff);
        if g.degree().map(|n| n > 0).unwrap_or(false) {
            for piece in equal_degree_split(field, &g, d, rng) {
                out.push((piece, 1));
            }
            rest = rest.div_exact(field, &g);
            xq = xq.rem(field, &rest);
        }
    }
    out
}

/// Splits a product of distinct irreducibles, all of degree d.
fn equal_degree_split<K: Field>(
    field: &K,
    f: &Poly<K>,
    d: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Poly<K>> {
    let n = f.degree().unwrap();
    if n == d {
        return vec![f.clone()];
    }
    let exp = (field.order().pow(d as u32) - 1) / 2;
    loop {
        let coeffs: Vec<K::El> = (0..n).map(|_| field.sample(rng)).collect();
        let a = Poly::new(field, coeffs);
        if a.degree().map(|k| k < 1).unwrap_or(true) {
            continue;
        }
        let b = a.pow_mod(field, exp, f).sub(field, &Poly::one(field));
        let g = f.gcd(field, &b);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let mut pieces = equal_degree_split(field, &g, d, rng);
            pieces.extend(equal_degree_split(field, &f.div_exact(field, &g), d, rng));
            return pieces;
        }
    }
}

pub fn is_irreducible<K: Field>(field: &K, f: &Poly<K>) -> bool {
    match f.degree() {
        None | Some(0) => false,
        Some(1) => true,
        Some(e) => {
            let q = field.order();
            let x = Poly::x(field);
            // x^(q^e) = x mod f, and gcd(x^(q^(e/l)) - x, f) = 1 for primes l | e.
            let mut xq = x.clone();
            let mut powers = Vec::with_capacity(e);
            for _ in 0..e {
                xq = xq.pow_mod(field, q, f);
                powers.push(xq.clone());
            }
            if powers[e - 1].sub(field, &x).rem(field, f).degree().is_some() {
                return false;
            }
            for l in 2..=e {
                if e % l == 0 && is_prime_usize(l) {
                    let diff = powers[e / l - 1].sub(field, &x);
                    if f.gcd(field, &diff).degree() != Some(0) {
                        return false;
                    }
                }
            }
            true
        }
    }
}

fn is_prime_usize(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// The lexicographically first monic irreducible of degree e over F_p.
pub fn find_irreducible(field: &Fp, e: usize) -> Poly<Fp> {
    assert!(e >= 1);
    if e == 1 {
        return Poly::x(field);
    }
    let p = field.char();
    let mut counter = vec![0u64; e];
    loop {
        let mut coeffs: Vec<u64> = counter.clone();
        coeffs.push(1);
        let f = Poly::new(field, coeffs);
        if is_irreducible(field, &f) {
            return f;
        }
        // Increment the base-p counter; degree e always admits an irreducible.
        let mut i = 0;
        loop {
            counter[i] += 1;
            if counter[i] < p {
                break;
            }
            counter[i] = 0;
            i += 1;
            assert!(i < e, "no irreducible of degree {e} found");
        }
    }
}

/// F_{p^e} with the deterministic lexicographically-first modulus.
pub fn ext_field(field: &Fp, e: usize) -> Ext<Fp> {
    let m = find_irreducible(field, e);
    Ext::new(*field, m.coeffs().to_vec())
}
