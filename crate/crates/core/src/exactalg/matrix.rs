//! Dense matrices over the supported coefficient fields, plus fast
//! specialized rank kernels for 𝔽_p (u64 rows) and small extension fields
//! (packed table-driven rows). Rank computations dominate the runtime of the
//! jumping-loci enumerations, so the hot paths avoid `FVal` entirely.

use super::{ExtField, FVal, Field};

/// A dense matrix with all entries belonging to a single [`Field`].
#[derive(Debug, Clone)]
pub struct FMat {
    pub nrows: usize,
    pub ncols: usize,
    /// Row-major entries, length nrows·ncols.
    pub data: Vec<FVal>,
}

impl FMat {
    pub fn zero(f: &Field, nrows: usize, ncols: usize) -> Self {
        FMat { nrows, ncols, data: vec![f.zero(); nrows * ncols] }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &FVal {
        &self.data[i * self.ncols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FVal) {
        self.data[i * self.ncols + j] = v;
    }
}

/// Rank by fraction-free-ish Gaussian elimination using exact field
/// arithmetic. Works over every supported field; use the specialized kernels
/// below for bulk finite-field work.
pub fn rank_generic(f: &Field, m: &FMat) -> usize {
    let mut a = m.data.clone();
    let (nr, nc) = (m.nrows, m.ncols);
    let mut rank = 0;
    let mut row = 0;
    for col in 0..nc {
        // find pivot
        let mut piv = None;
        for r in row..nr {
            if !f.is_zero(&a[r * nc + col]) {
                piv = Some(r);
                break;
            }
        }
        let Some(piv) = piv else { continue };
        a.swap_chunks(piv, row, nc);
        let inv = f.inv(&a[row * nc + col]);
        for r in row + 1..nr {
            let factor = f.mul(&a[r * nc + col], &inv);
            if f.is_zero(&factor) {
                continue;
            }
            for c in col..nc {
                let sub = f.mul(&factor, &a[row * nc + c]);
                let v = f.sub(&a[r * nc + c], &sub);
                a[r * nc + c] = v;
            }
        }
        row += 1;
        rank += 1;
        if row == nr {
            break;
        }
    }
    rank
}

trait SwapChunks {
    fn swap_chunks(&mut self, i: usize, j: usize, width: usize);
}

impl SwapChunks for Vec<FVal> {
    fn swap_chunks(&mut self, i: usize, j: usize, width: usize) {
        if i == j {
            return;
        }
        for k in 0..width {
            self.swap(i * width + k, j * width + k);
        }
    }
}

/// Rank of a matrix over 𝔽_p given as row-major u64 entries already reduced
/// mod p. Destroys `rows`. p must satisfy p² < 2⁶⁴ is not required — products
/// go through u128.
pub fn rank_mod_p(rows: &mut [Vec<u64>], p: u64) -> usize {
    let nr = rows.len();
    if nr == 0 {
        return 0;
    }
    let nc = rows[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..nc {
        let mut piv = None;
        for r in row..nr {
            if rows[r][col] % p != 0 {
                piv = Some(r);
                break;
            }
        }
        let Some(piv) = piv else { continue };
        rows.swap(piv, row);
        let inv = super::inv_mod(rows[row][col] % p, p);
        for r in row + 1..nr {
            let lead = rows[r][col] % p;
            if lead == 0 {
                continue;
            }
            let factor = super::mul_mod(lead, inv, p);
            // rows[r] -= factor * rows[row]
            let (head, tail) = rows.split_at_mut(row + 1);
            let prow = &head[row];
            let trow = &mut tail[r - row - 1];
            for c in col..nc {
                let sub = (factor as u128 * prow[c] as u128 % p as u128) as u64;
                trow[c] = (trow[c] % p + p - sub) % p;
            }
        }
        row += 1;
        rank += 1;
        if row == nr {
            break;
        }
    }
    rank
}

/// Rank over a table-backed extension field; rows hold packed element
/// indices. Destroys `rows`.
pub fn rank_gf(f: &ExtField, rows: &mut [Vec<u32>]) -> usize {
    let nr = rows.len();
    if nr == 0 {
        return 0;
    }
    let nc = rows[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..nc {
        let mut piv = None;
        for r in row..nr {
            if rows[r][col] != 0 {
                piv = Some(r);
                break;
            }
        }
        let Some(piv) = piv else { continue };
        rows.swap(piv, row);
        let inv = f.inv(rows[row][col]);
        for r in row + 1..nr {
            if rows[r][col] == 0 {
                continue;
            }
            let factor = f.mul(rows[r][col], inv);
            let (head, tail) = rows.split_at_mut(row + 1);
            let prow = &head[row];
            let trow = &mut tail[r - row - 1];
            for c in col..nc {
                let sub = f.mul(factor, prow[c]);
                trow[c] = f.sub(trow[c], sub);
            }
        }
        row += 1;
        rank += 1;
        if row == nr {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::FieldSpec;
    use num::BigRational;

    fn rat(n: i64) -> FVal {
        FVal::Rat(BigRational::from(num::BigInt::from(n)))
    }

    #[test]
    fn rank_over_q() {
        let f = Field::Rationals;
        // [[1,2,3],[2,4,6],[0,1,1]] has rank 2
        let mut m = FMat::zero(&f, 3, 3);
        for (i, row) in [[1, 2, 3], [2, 4, 6], [0, 1, 1]].iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, rat(v));
            }
        }
        assert_eq!(rank_generic(&f, &m), 2);
    }

    #[test]
    fn rank_kernels_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let p = 5u64;
        let f = Field::Prime(super::super::PrimeField { p });
        for _ in 0..50 {
            let nr = rng.gen_range(1..6);
            let nc = rng.gen_range(1..6);
            let mut rows: Vec<Vec<u64>> = (0..nr)
                .map(|_| (0..nc).map(|_| rng.gen_range(0..p)).collect())
                .collect();
            let mut m = FMat::zero(&f, nr, nc);
            for i in 0..nr {
                for j in 0..nc {
                    m.set(i, j, FVal::Fp(rows[i][j]));
                }
            }
            assert_eq!(rank_mod_p(&mut rows, p), rank_generic(&f, &m));
        }
    }

    #[test]
    fn rank_gf4_agrees_with_generic() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let spec = FieldSpec::ExtensionField { p: 2, s: 2, min_poly: None };
        let field = spec.build().unwrap();
        let Field::Ext(ef) = &field else { unreachable!() };
        for _ in 0..50 {
            let nr = rng.gen_range(1..6);
            let nc = rng.gen_range(1..6);
            let mut rows: Vec<Vec<u32>> = (0..nr)
                .map(|_| (0..nc).map(|_| rng.gen_range(0..4u32)).collect())
                .collect();
            let mut m = FMat::zero(&field, nr, nc);
            for i in 0..nr {
                for j in 0..nc {
                    m.set(i, j, FVal::Fq(rows[i][j]));
                }
            }
            assert_eq!(rank_gf(ef, &mut rows), rank_generic(&field, &m));
        }
    }
}
