//! Self-contained reference implementations used as oracles: naive modular
//! linear algebra and a Jordan-chain construction.  Deliberately independent
//! of the library's matrix code.

pub type NMat = Vec<Vec<u64>>;

pub fn ninv(p: u64, a: u64) -> u64 {
    // Fermat, p prime.
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

pub fn nmul(p: u64, a: &NMat, b: &NMat) -> NMat {
    let (n, m, l) = (a.len(), b[0].len(), b.len());
    let mut out = vec![vec![0u64; m]; n];
    for i in 0..n {
        for k in 0..l {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] = (out[i][j] + a[i][k] * b[k][j]) % p;
            }
        }
    }
    out
}

pub fn nmatvec(p: u64, a: &NMat, v: &[u64]) -> Vec<u64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y % p).sum::<u64>() % p)
        .collect()
}

pub fn nidentity(n: usize) -> NMat {
    (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect()
}

pub fn nis_zero(a: &NMat) -> bool {
    a.iter().all(|r| r.iter().all(|&x| x == 0))
}

/// Plain Gaussian elimination; returns (row echelon matrix, pivot columns).
fn echelonize(p: u64, a: &NMat) -> (NMat, Vec<usize>) {
    let mut m = a.clone();
    let (rows, cols) = (m.len(), if m.is_empty() { 0 } else { m[0].len() });
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| m[i][c] % p != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = ninv(p, m[r][c]);
        for j in 0..cols {
            m[r][j] = m[r][j] * inv % p;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + (p - f) * m[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (m, pivots)
}

pub fn nrank(p: u64, a: &NMat) -> usize {
    echelonize(p, a).1.len()
}

pub fn nnullspace(p: u64, a: &NMat) -> Vec<Vec<u64>> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let (m, pivots) = echelonize(p, a);
    let mut out = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - m[r][free] % p) % p;
        }
        out.push(v);
    }
    out
}

/// Incremental row space with reduction, for independence tests.
pub struct Ech {
    p: u64,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Ech {
    pub fn new(p: u64) -> Ech {
        Ech {
            p,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Returns true if v was independent and is now part of the span.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let p = self.p;
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            if v[piv] != 0 {
                let f = v[piv];
                for (x, y) in v.iter_mut().zip(row) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = ninv(p, v[piv]);
        for x in v.iter_mut() {
            *x = *x * inv % p;
        }
        self.rows.push(v);
        self.pivots.push(piv);
        true
    }
}

/// Jordan block sizes of a nilpotent matrix, found by building explicit
/// Jordan chains from generalized eigenspaces and certifying that the chain
/// vectors form a basis on which the matrix acts in Jordan form.
pub fn chain_jordan_blocks(p: u64, a: &NMat) -> Vec<usize> {
    let n = a.len();
    if n == 0 {
        return Vec::new();
    }
    let mut pows = vec![nidentity(n)];
    while !nis_zero(pows.last().unwrap()) {
        let next = nmul(p, pows.last().unwrap(), a);
        pows.push(next);
        assert!(pows.len() <= n + 1, "matrix is not nilpotent");
    }
    let s = pows.len() - 1; // A^s = 0, A^{s-1} != 0
    let mut chains: Vec<Vec<Vec<u64>>> = Vec::new();
    for k in (1..=s).rev() {
        let mut ech = Ech::new(p);
        for v in nnullspace(p, &pows[k - 1]) {
            ech.insert(v);
        }
        for ch in chains.iter_mut() {
            let img = nmatvec(p, a, ch.last().unwrap());
            ech.insert(img.clone());
            ch.push(img);
        }
        for v in nnullspace(p, &pows[k]) {
            if ech.insert(v.clone()) {
                chains.push(vec![v]);
            }
        }
    }
    // Certificate: the chain vectors are a basis and each chain terminates.
    let all: NMat = chains.iter().flatten().cloned().collect();
    assert_eq!(all.len(), n, "chain vectors must fill the space");
    assert_eq!(nrank(p, &all), n, "chain vectors must be independent");
    for ch in &chains {
        for w in ch.windows(2) {
            assert_eq!(nmatvec(p, a, &w[0]), w[1]);
        }
        assert!(nmatvec(p, a, ch.last().unwrap()).iter().all(|&x| x == 0));
    }
    let mut blocks: Vec<usize> = chains.iter().map(|c| c.len()).collect();
    blocks.sort_unstable_by(|x, y| y.cmp(x));
    blocks
}

/// Seeded nilpotent matrix: strictly upper triangular entries conjugated by
/// random elementary similarity transformations.
pub fn random_nilpotent(p: u64, n: usize, rng: &mut impl rand::Rng) -> NMat {
    let mut a = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            a[i][j] = rng.random_range(0..p);
        }
    }
    for _ in 0..(4 * n) {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i == j {
            continue;
        }
        let c = rng.random_range(0..p);
        // A <- E A E^{-1} with E: row_i += c row_j.
        for col in 0..n {
            a[i][col] = (a[i][col] + c * a[j][col]) % p;
        }
        for row in 0..n {
            a[row][j] = (a[row][j] + (p - c % p) * a[row][i]) % p;
        }
    }
    a
}
