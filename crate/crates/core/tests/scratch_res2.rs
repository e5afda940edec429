use arrkit::corpus::load;
use arrkit::jumpingloci::JumpingLoci;

#[test]
fn nonfano_r1_f2_points() {
    let arr = load("nonfano").unwrap();
    let jl = JumpingLoci::from_arrangement(&arr, Some(7)).unwrap();
    let n = 7;
    let mut pts = Vec::new();
    for mask in 1u64..(1 << n) {
        let v: Vec<u64> = (0..n).map(|i| (mask >> i) & 1).collect();
        if jl.lin_rank_mod_p(&v, 2) < n - 1 {
            pts.push(v);
        }
    }
    println!("{} points in R1(F2):", pts.len());
    for v in &pts {
        println!("  {v:?}");
    }
}
