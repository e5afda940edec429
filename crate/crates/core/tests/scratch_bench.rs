//! One-off benchmarks for corpus-scale enumerations.

use arrkit::arrangement::ArrangementFile;
use arrkit::jumpingloci::{beta_invariants, nu_invariants, JumpingLoci};
use std::time::Instant;

fn load(name: &str) -> arrkit::arrangement::Arrangement {
    let text = std::fs::read_to_string(format!(
        "{}/data/{name}.json",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap();
    ArrangementFile::from_json(&text).unwrap().to_arrangement().unwrap()
}

#[test]
fn bench_pappus_beta52() {
    let arr = load("pappus");
    let jl = JumpingLoci::from_arrangement(&arr, Some(7)).unwrap();
    let t0 = Instant::now();
    let prof = beta_invariants(&jl, 3, 2, 1 << 24).unwrap();
    println!("pappus beta(3,2) = {prof:?} in {:?}", t0.elapsed());
    let t0 = Instant::now();
    let prof = beta_invariants(&jl, 5, 2, 1 << 24).unwrap();
    println!("pappus beta(5,2) = {prof:?} in {:?}", t0.elapsed());
    let t0 = Instant::now();
    let prof = nu_invariants(&jl, 5, 1 << 24).unwrap();
    println!("pappus nu(5) = {prof:?} in {:?}", t0.elapsed());
}

#[test]
fn bench_ziegler_beta32() {
    let arr = load("ziegler1");
    let jl = JumpingLoci::from_arrangement(&arr, Some(7)).unwrap();
    let t0 = Instant::now();
    let prof = beta_invariants(&jl, 2, 3, 1 << 26).unwrap();
    println!("ziegler1 beta(2,3) = {prof:?} in {:?}", t0.elapsed());
    let t0 = Instant::now();
    let prof = beta_invariants(&jl, 3, 2, 1 << 26).unwrap();
    println!("ziegler1 beta(3,2) = {prof:?} in {:?}", t0.elapsed());
}
