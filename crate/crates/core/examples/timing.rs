use sl2sheaf::verify::{verify_all, VerifyConfig};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let p: u64 = args[1].parse().unwrap();
    let lmax: usize = args[2].parse().unwrap();
    let t0 = std::time::Instant::now();
    for r in verify_all(&VerifyConfig::new(p, lmax)) {
        println!("{} {} ({})", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
    }
    println!("elapsed: {:?}", t0.elapsed());
}
