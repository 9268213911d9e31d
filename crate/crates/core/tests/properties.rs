//! Property-based invariants: partition combinatorics, Jordan type
//! computations against the chain oracle, graded saturation, degreewise
//! rank-nullity, scaling invariance, and determinism of the verifier.

mod common;

use common::{chain_jordan_blocks, random_nilpotent, NMat};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sl2sheaf::field::{Field, Fp};
use sl2sheaf::graded::{saturate, submodule_from_generators};
use sl2sheaf::matrix::Matrix;
use sl2sheaf::nullcone::PointP1;
use sl2sheaf::partition::{jordan_type_from_ranks, Partition};
use sl2sheaf::sl2::{dual_weyl, phi, weyl, Sl2Module};
use sl2sheaf::theta::build_theta;
use sl2sheaf::verify::{verify_all, VerifyConfig};

fn small_prime() -> impl Strategy<Value = u64> {
    prop_oneof![Just(3u64), Just(5), Just(7)]
}

fn module_for(k: &Fp, pick: u8, lambda: usize) -> Sl2Module<Fp> {
    let p = k.char() as usize;
    match pick % 3 {
        0 => weyl(k, lambda),
        1 => dual_weyl(k, lambda),
        _ => {
            let l = lambda.max(p);
            let l = if (l + 1) % p == 0 { l + 1 } else { l };
            phi(k, l, &PointP1::Finite(1)).unwrap()
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn conjugation_is_an_involution(parts in proptest::collection::vec(1usize..=9, 0..8)) {
        let p = Partition::from_unsorted(parts);
        let c = p.conjugate();
        prop_assert_eq!(c.conjugate(), p.clone());
        prop_assert_eq!(c.sum(), p.sum());
    }

    #[test]
    fn rank_sequence_equals_chain_oracle(seed in any::<u64>(), n in 2usize..=8, p in small_prime()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: NMat = random_nilpotent(p, n, &mut rng);
        let blocks = chain_jordan_blocks(p, &a);
        prop_assume!(blocks[0] <= p as usize);
        let k = Fp::new(p).unwrap();
        let m = Matrix::from_fn(&k, n, n, |i, j| a[i][j]);
        let mut ranks = Vec::new();
        let mut acc = m.clone();
        for _ in 1..=p {
            let r = acc.rank(&k);
            ranks.push(r);
            if r == 0 { break; }
            acc = acc.mul(&k, &m);
        }
        let got = jordan_type_from_ranks(n, &ranks).unwrap();
        prop_assert_eq!(got.parts(), blocks.as_slice());
    }

    #[test]
    fn saturation_is_idempotent(
        p in small_prime(),
        gens_raw in proptest::collection::vec((1i64..=3, proptest::collection::vec(0u64..7, 8)), 1..4),
    ) {
        let k = Fp::new(p).unwrap();
        let twists = vec![0i64, 0];
        let max_degree = 12i64;
        let gens: Vec<(i64, Vec<u64>)> = gens_raw
            .into_iter()
            .map(|(d, raw)| {
                let w = 2 * (d as usize + 1);
                (d, raw.into_iter().take(w).map(|x| x % p).collect())
            })
            .collect();
        prop_assume!(gens.iter().all(|(d, v)| v.len() == 2 * (*d as usize + 1)));
        let sub = submodule_from_generators(&k, &twists, &gens, max_degree);
        let (sat, valid) = saturate(&sub, 40).unwrap();
        let (sat2, valid2) = saturate(&sat, 40).unwrap();
        let top = valid.min(valid2);
        for d in 0..=top {
            // Inflationary and idempotent on the certified window.
            prop_assert!(sat.dim_at(d) >= sub.dim_at(d));
            prop_assert_eq!(sat2.dim_at(d), sat.dim_at(d));
        }
    }

    #[test]
    fn linear_components_satisfy_rank_nullity(
        p in small_prime(),
        pick in any::<u8>(),
        lambda in 0usize..=10,
        d in 0usize..=5,
    ) {
        let k = Fp::new(p).unwrap();
        let m = module_for(&k, pick, lambda);
        let th = build_theta(&m);
        let lin = th.linear_component(d);
        prop_assert_eq!(lin.rank(&k) + lin.nullspace(&k).len(), th.cols() * (d + 1));
    }

    #[test]
    fn jordan_type_is_scaling_invariant(
        p in small_prime(),
        pick in any::<u8>(),
        lambda in 0usize..=10,
        s in 0u64..7,
        t in 0u64..7,
        c in 1u64..7,
    ) {
        let k = Fp::new(p).unwrap();
        prop_assume!(s % p != 0 || t % p != 0);
        prop_assume!(c % p != 0);
        let m = module_for(&k, pick, lambda);
        let th = build_theta(&m);
        let (s, t, c) = (s % p, t % p, c % p);
        let a = th.eval(&s, &t);
        let b = th.eval(&(c * s % p), &(c * t % p));
        let ty = |x: &Matrix<Fp>| {
            let mut ranks = Vec::new();
            let mut acc = x.clone();
            for _ in 1..=p {
                let r = acc.rank(&k);
                ranks.push(r);
                if r == 0 { break; }
                acc = acc.mul(&k, x);
            }
            jordan_type_from_ranks(x.rows(), &ranks).unwrap()
        };
        prop_assert_eq!(ty(&a), ty(&b));
    }
}

#[test]
fn verifier_is_deterministic() {
    let cfg = VerifyConfig::new(3, 7);
    let a = serde_json::to_string(&verify_all(&cfg)).unwrap();
    let b = serde_json::to_string(&verify_all(&cfg)).unwrap();
    assert_eq!(a, b);
}
