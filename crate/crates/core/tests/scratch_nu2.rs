//! Oracle: nu_{2,d} for deleted B3 by direct index-2 kernel homology.
use arrkit::braidgroup::group_presentation;
use arrkit::corpus::load;
use arrkit::foxcalc::kernel_homology;
use num::BigInt;
use std::collections::BTreeMap;

#[test]
fn db3_nu2_oracle() {
    let arr = load("deletedb3").unwrap();
    let pres = group_presentation(&arr, Some(7)).unwrap();
    let n = arr.n;
    let mut profile: BTreeMap<usize, u64> = BTreeMap::new();
    for mask in 1u64..(1 << n) {
        let row: Vec<i64> = (0..n).map(|i| ((mask >> i) & 1) as i64).collect();
        let kh = kernel_homology(&pres, &[row], &[2], 1 << 20).unwrap();
        let two = BigInt::from(2);
        let b1_mod2 = kh.free_rank
            + kh.torsion.iter().filter(|t| (*t % &two) == BigInt::from(0)).count();
        assert!(b1_mod2 >= n, "mask {mask}: b1_mod2 = {b1_mod2}");
        *profile.entry(b1_mod2 - n).or_insert(0) += 1;
    }
    println!("db3 nu_2 oracle profile: {profile:?}");
}
