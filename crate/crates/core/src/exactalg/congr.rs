//! Solving linear congruence systems A·x ≡ b (mod n) via the Smith normal
//! form, with full enumeration of the solution set. Used to list the N-torsion
//! points lying on a rational subtorus (or translated subtorus) of the
//! character torus.

use super::snf::snf_with_transforms;
use crate::{Error, Result};
use num::{BigInt, Integer, Signed, Zero};

/// The solution set of A·x ≡ b (mod n) in (ℤ_n)^m, described as a coset
/// base + span{gens} where generator i ranges over multiples of its step with
/// `counts[i]` choices.
#[derive(Debug, Clone)]
pub struct AffineSolutions {
    pub modulus: u64,
    /// One particular solution.
    pub base: Vec<u64>,
    /// Direction vectors; solution set = base + Σ tᵢ·gens[i] with
    /// tᵢ ∈ {0, …, counts[i]−1}.
    pub gens: Vec<Vec<u64>>,
    pub counts: Vec<u64>,
}

impl AffineSolutions {
    /// Total number of solutions.
    pub fn count(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).product()
    }

    /// Iterate over every solution vector (entries reduced mod n).
    pub fn iter(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let m = self.base.len();
        let k = self.gens.len();
        let total = self.count();
        (0..total).map(move |mut idx| {
            let mut x = self.base.clone();
            for i in 0..k {
                let t = (idx % self.counts[i] as u128) as u64;
                idx /= self.counts[i] as u128;
                if t != 0 {
                    for j in 0..m {
                        x[j] = (x[j] + super::mul_mod(t, self.gens[i][j], self.modulus))
                            % self.modulus;
                    }
                }
            }
            x
        })
    }
}

/// Solve A·x ≡ b (mod n) for x ∈ (ℤ_n)^m. Returns None when inconsistent.
///
/// With U·A·V = D (Smith form), substitute x = V·y: the system becomes
/// dᵢ·yᵢ ≡ (U·b)ᵢ (mod n), each a scalar congruence with gcd(dᵢ, n)
/// solutions when solvable.
pub fn solve_linear_mod(a: &[Vec<i64>], b: &[i64], n: u64) -> Result<Option<AffineSolutions>> {
    if n == 0 {
        return Err(Error::Unsupported("modulus must be positive".into()));
    }
    let nr = a.len();
    let nc = if nr == 0 { 0 } else { a[0].len() };
    if b.len() != nr {
        return Err(Error::Unsupported("dimension mismatch in congruence system".into()));
    }
    let abig: Vec<Vec<BigInt>> =
        a.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let (diag, u, v) = snf_with_transforms(&abig);
    let nbig = BigInt::from(n);
    // c = U·b mod n
    let c: Vec<u64> = (0..nr)
        .map(|i| {
            let s: BigInt = (0..nr).map(|j| &u[i][j] * BigInt::from(b[j])).sum();
            to_residue(&s, &nbig)
        })
        .collect();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    // Consistency and per-coordinate solutions for y.
    let mut y_base = vec![0u64; nc];
    let mut y_steps: Vec<(usize, u64, u64)> = Vec::new(); // (coord, step, count)
    for i in 0..nc {
        if i < diag.len() && i < rank {
            let d = to_residue(&diag[i], &nbig);
            let g = gcd(d, n);
            if c.get(i).copied().unwrap_or(0) % g != 0 {
                return Ok(None);
            }
            let ci = c[i];
            let np = n / g;
            // (d/g)·y ≡ (c/g) (mod n/g)
            let dg = (d / g) % np;
            let y0 = if np == 1 {
                0
            } else {
                super::mul_mod(ci / g % np, super::inv_mod(dg, np), np)
            };
            y_base[i] = y0;
            if g > 1 {
                y_steps.push((i, np, g));
            }
        } else {
            // zero diagonal (or beyond row count): yᵢ free mod n, but the
            // equation 0 ≡ cᵢ must hold when i indexes a row.
            y_steps.push((i, 1, n));
        }
    }
    for (i, ci) in c.iter().enumerate() {
        if (i >= diag.len() || diag[i].is_zero()) && *ci != 0 {
            return Ok(None);
        }
    }
    // Map back: x = V·y mod n.
    let vmod: Vec<Vec<u64>> = v
        .iter()
        .map(|row| row.iter().map(|e| to_residue(e, &nbig)).collect())
        .collect();
    let base: Vec<u64> = (0..nc)
        .map(|r| {
            let mut acc = 0u64;
            for (j, &yj) in y_base.iter().enumerate() {
                acc = (acc + super::mul_mod(vmod[r][j], yj, n)) % n;
            }
            acc
        })
        .collect();
    let mut gens = Vec::new();
    let mut counts = Vec::new();
    for (coord, step, count) in y_steps {
        let dir: Vec<u64> = (0..nc).map(|r| super::mul_mod(vmod[r][coord], step % n, n)).collect();
        gens.push(dir);
        counts.push(count);
    }
    Ok(Some(AffineSolutions { modulus: n, base, gens, counts }))
}

fn to_residue(x: &BigInt, n: &BigInt) -> u64 {
    let r = x % n;
    let r = if r.is_negative() { r + n } else { r };
    u64::try_from(r).unwrap()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Brute-force reference for small systems.
    fn brute(a: &[Vec<i64>], b: &[i64], n: u64) -> HashSet<Vec<u64>> {
        let nc = if a.is_empty() { 0 } else { a[0].len() };
        let mut out = HashSet::new();
        let total = (n as u128).pow(nc as u32);
        for mut idx in 0..total {
            let x: Vec<u64> = (0..nc)
                .map(|_| {
                    let v = (idx % n as u128) as u64;
                    idx /= n as u128;
                    v
                })
                .collect();
            let ok = a.iter().zip(b).all(|(row, &bi)| {
                let s: i128 = row.iter().zip(&x).map(|(&c, &xv)| c as i128 * xv as i128).sum();
                (s - bi as i128).rem_euclid(n as i128) == 0
            });
            if ok {
                out.insert(x);
            }
        }
        out
    }

    #[test]
    fn matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..60 {
            let n = *[2u64, 3, 4, 5, 6].get(rng.gen_range(0..5)).unwrap();
            let nr = rng.gen_range(0..4);
            let nc = rng.gen_range(1..4);
            let a: Vec<Vec<i64>> =
                (0..nr).map(|_| (0..nc).map(|_| rng.gen_range(-5..6)).collect()).collect();
            let b: Vec<i64> = (0..nr).map(|_| rng.gen_range(-5..6)).collect();
            let expect = brute(&a, &b, n);
            match solve_linear_mod(&a, &b, n).unwrap() {
                None => assert!(expect.is_empty(), "system {a:?} x = {b:?} mod {n}"),
                Some(sols) => {
                    let got: HashSet<Vec<u64>> = sols.iter().collect();
                    assert_eq!(got.len() as u128, sols.count(), "duplicate solutions");
                    assert_eq!(got, expect, "system {a:?} x = {b:?} mod {n}");
                }
            }
        }
    }
}
