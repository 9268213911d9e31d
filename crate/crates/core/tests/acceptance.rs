//! Acceptance gate: one test per top-level criterion.  Each test prints a
//! single pass/fail line and asserts, so `cargo test --test acceptance`
//! doubles as a human-readable checklist.

mod common;

use std::time::Instant;

use common::{chain_jordan_blocks, random_nilpotent, NMat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sl2sheaf::field::Fp;
use sl2sheaf::graded::{saturate, submodule_from_generators};
use sl2sheaf::matrix::Matrix;
use sl2sheaf::partition::{jordan_type_from_ranks, Partition};
use sl2sheaf::sl2::weyl;
use sl2sheaf::theta::build_theta;
use sl2sheaf::verify::{
    check_bprime_pointwise, check_heller_shifts, check_jordan_types, check_kernel_propositions,
    check_named_matrices, check_reference_example, check_simple_filtration, check_weyl_filtration,
    verify_all, CheckResult, VerifyConfig,
};

fn gate(name: &str, results: &[CheckResult]) {
    let failed: Vec<&CheckResult> = results.iter().filter(|r| !r.passed).collect();
    if failed.is_empty() {
        println!("ACCEPTANCE {name}: PASS");
    } else {
        println!("ACCEPTANCE {name}: FAIL");
        for f in failed {
            println!("  {}: {}", f.name, f.detail);
        }
        panic!("acceptance criterion failed: {name}");
    }
}

fn over_primes(f: impl Fn(&VerifyConfig) -> CheckResult, primes: &[u64]) -> Vec<CheckResult> {
    primes
        .iter()
        .map(|&p| f(&VerifyConfig::new(p, 3 * p as usize)))
        .collect()
}

#[test]
fn criterion_1_jordan_type_tables() {
    gate(
        "1 jordan type tables p in {3,5,7}",
        &over_primes(check_jordan_types, &[3, 5, 7]),
    );
}

#[test]
fn criterion_2_reference_example() {
    gate(
        "2 reference example p=5 V(2)",
        &[check_reference_example()],
    );
}

#[test]
fn criterion_3_named_matrix_equality() {
    gate(
        "3 named matrix equality p in {3,5,7}",
        &over_primes(check_named_matrices, &[3, 5, 7]),
    );
}

#[test]
fn criterion_4_kernel_propositions() {
    gate(
        "4 kernel splitting types p in {3,5,7}",
        &over_primes(check_kernel_propositions, &[3, 5, 7]),
    );
}

#[test]
fn criterion_5_bprime_pointwise_types() {
    gate(
        "5 pointwise specializations of B'(lambda)",
        &over_primes(check_bprime_pointwise, &[3, 5, 7]),
    );
}

#[test]
fn criterion_6_simple_module_filtration() {
    // The filtration statements for simple modules concern lambda < p.
    let results: Vec<CheckResult> = [3u64, 5, 7]
        .iter()
        .map(|&p| check_simple_filtration(&VerifyConfig::new(p, p as usize - 1)))
        .collect();
    gate("6 filtration of simple modules", &results);
}

#[test]
fn criterion_7_heller_shifts() {
    gate(
        "7 heller shift isomorphisms p in {3,5}",
        &over_primes(check_heller_shifts, &[3, 5]),
    );
}

#[test]
fn criterion_8_weyl_filtration_layers() {
    gate(
        "8 filtration layers of Weyl modules p in {3,5}",
        &over_primes(check_weyl_filtration, &[3, 5]),
    );
}

#[test]
fn criterion_9_property_suites() {
    let start = Instant::now();
    let mut failures: Vec<String> = Vec::new();

    // Conjugation is an involution.
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    for _ in 0..50 {
        use rand::Rng;
        let len = rng.random_range(0..8usize);
        let parts: Vec<usize> = (0..len).map(|_| rng.random_range(1..=9)).collect();
        let pa = Partition::from_unsorted(parts);
        if pa.conjugate().conjugate() != pa {
            failures.push(format!("conjugate not involutive on {}", pa.to_exp_string()));
        }
    }

    // Rank-sequence Jordan types agree with explicit chain construction.
    for p in [3u64, 5, 7] {
        let k = Fp::new(p).unwrap();
        for n in 2..=8usize {
            for _ in 0..6 {
                let a: NMat = random_nilpotent(p, n, &mut rng);
                let blocks = chain_jordan_blocks(p, &a);
                if blocks[0] > p as usize {
                    continue;
                }
                let m = Matrix::from_fn(&k, n, n, |i, j| a[i][j]);
                let mut ranks = Vec::new();
                let mut acc = m.clone();
                for _ in 1..=p {
                    let r = acc.rank(&k);
                    ranks.push(r);
                    if r == 0 {
                        break;
                    }
                    acc = acc.mul(&k, &m);
                }
                let got = jordan_type_from_ranks(n, &ranks).unwrap();
                if got.parts() != blocks.as_slice() {
                    failures.push(format!("jordan mismatch p={p} n={n}"));
                }
            }
        }
    }

    // Saturation is idempotent.
    for p in [3u64, 5] {
        use rand::Rng;
        let k = Fp::new(p).unwrap();
        for _ in 0..8 {
            let gens: Vec<(i64, Vec<u64>)> = (0..rng.random_range(1..4usize))
                .map(|_| {
                    let d = rng.random_range(1i64..=3);
                    let v = (0..2 * (d as usize + 1))
                        .map(|_| rng.random_range(0..p))
                        .collect();
                    (d, v)
                })
                .collect();
            let sub = submodule_from_generators(&k, &[0, 0], &gens, 12);
            let (sat, valid) = saturate(&sub, 40).unwrap();
            let (sat2, valid2) = saturate(&sat, 40).unwrap();
            for d in 0..=valid.min(valid2) {
                if sat2.dim_at(d) != sat.dim_at(d) || sat.dim_at(d) < sub.dim_at(d) {
                    failures.push(format!("saturation unstable at p={p} d={d}"));
                }
            }
        }
    }

    // Degreewise rank-nullity and scaling invariance of local Jordan types.
    for p in [3u64, 5] {
        let k = Fp::new(p).unwrap();
        for lambda in 0..=(2 * p as usize) {
            let m = weyl(&k, lambda);
            let th = build_theta(&m);
            for d in 0..=3usize {
                let lin = th.linear_component(d);
                if lin.rank(&k) + lin.nullspace(&k).len() != th.cols() * (d + 1) {
                    failures.push(format!("rank-nullity p={p} lambda={lambda} d={d}"));
                }
            }
            let ty = |s: u64, t: u64| {
                let x = th.eval(&s, &t);
                let mut ranks = Vec::new();
                let mut acc = x.clone();
                for _ in 1..=p {
                    let r = acc.rank(&k);
                    ranks.push(r);
                    if r == 0 {
                        break;
                    }
                    acc = acc.mul(&k, &x);
                }
                jordan_type_from_ranks(x.rows(), &ranks).unwrap()
            };
            for c in 2..p {
                if ty(1, 1) != ty(c, c) || ty(1, 0) != ty(c, 0) {
                    failures.push(format!("scaling p={p} lambda={lambda} c={c}"));
                }
            }
        }
    }

    // Determinism of the full verifier under a fixed configuration.
    let cfg = VerifyConfig::new(3, 6);
    let a = serde_json::to_string(&verify_all(&cfg)).unwrap();
    let b = serde_json::to_string(&verify_all(&cfg)).unwrap();
    if a != b {
        failures.push("verify-all output is not deterministic".to_string());
    }

    let elapsed = start.elapsed();
    if failures.is_empty() && elapsed.as_secs() < 60 {
        println!("ACCEPTANCE 9 property suites ({elapsed:.2?}): PASS");
    } else {
        println!("ACCEPTANCE 9 property suites ({elapsed:.2?}): FAIL");
        for f in &failures {
            println!("  {f}");
        }
        panic!("acceptance criterion failed: 9 property suites");
    }
}
