//! Exact arithmetic substrate.
//!
//! Provides big rationals, number fields ℚ[x]/(m) of small degree, prime
//! fields 𝔽_p, extension fields 𝔽_{p^s}, sparse multivariate Laurent
//! polynomials over ℤ, exact matrix rank over any of these fields, integer
//! Smith normal form, and solvers for linear congruence systems.

mod fields;
mod laurent;
mod matrix;
mod snf;
mod congr;

pub use fields::{ExtField, FVal, Field, FieldSpec, NumberField, PrimeField};
pub use laurent::{int_to_field, Expo, Laurent};
pub use matrix::{rank_generic, rank_gf, rank_mod_p, FMat};
pub use snf::{
    integer_kernel, padic_invariant_valuations, snf_dense, snf_sparse, snf_with_transforms,
    sparse_rank_mod_p, SparseInt,
};
pub use congr::{solve_linear_mod, AffineSolutions};

use num::BigInt;

/// Möbius function μ(k) for k ≥ 1, by trial-division factorization.
pub fn moebius(k: u64) -> i32 {
    assert!(k >= 1, "moebius requires k >= 1");
    let mut k = k;
    let mut nfactors = 0;
    let mut d = 2;
    while d * d <= k {
        if k % d == 0 {
            k /= d;
            if k % d == 0 {
                return 0; // square factor
            }
            nfactors += 1;
        }
        d += 1;
    }
    if k > 1 {
        nfactors += 1;
    }
    if nfactors % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Deterministic primality test for u64 (Miller–Rabin with fixed witnesses).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Modular multiplication via u128.
#[inline(always)]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Modular exponentiation.
pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Modular inverse for any modulus m with gcd(a, m) = 1 (extended Euclid).
pub fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert!(r0 == 1, "element {a} not invertible mod {m}");
    t0.rem_euclid(m as i128) as u64
}

/// Smallest prime ℓ ≡ 1 (mod n) with ℓ > floor, found by stepping through the
/// arithmetic progression (Dirichlet guarantees termination).
pub fn prime_in_progression(n: u64, floor: u64) -> u64 {
    let mut l = floor / n * n + 1;
    while l <= floor {
        l += n;
    }
    while !is_prime(l) {
        l += n;
    }
    l
}

/// Euler totient by trial division.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            while n % d == 0 {
                n /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Multiplicative order of q modulo p (least s ≥ 1 with q^s ≡ 1 mod p).
/// Panics if gcd(q, p) ≠ 1.
pub fn mult_order(q: u64, p: u64) -> u32 {
    assert!(p > 1 && q % p != 0, "order requires q invertible mod p");
    let mut s = 1u32;
    let mut acc = q % p;
    while acc != 1 {
        acc = mul_mod(acc, q, p);
        s += 1;
        assert!(s <= p as u32, "order search overran the group");
    }
    s
}

/// The N-th cyclotomic polynomial Φ_N as integer coefficients (low to high),
/// computed by the recursive quotient x^N − 1 / ∏_{d|N, d<N} Φ_d.
pub fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    // num[k] coefficients of x^n - 1
    let mut num: Vec<BigInt> = vec![BigInt::from(0); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::from(1);
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

/// Exact division of integer polynomials (panics on nonzero remainder).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd] == BigInt::from(1), "divisor must be monic");
    let mut quo = vec![BigInt::from(0); rem.len() - dd];
    for i in (0..quo.len()).rev() {
        let c = rem[i + dd].clone();
        quo[i] = c.clone();
        for j in 0..=dd {
            rem[i + j] -= &c * &den[j];
        }
    }
    assert!(rem.iter().all(|c| *c == BigInt::from(0)), "non-exact division");
    quo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moebius_small_values() {
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(4), 0);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(30), -1);
        assert_eq!(moebius(7), -1);
    }

    #[test]
    fn mult_orders() {
        assert_eq!(mult_order(3, 2), 1);
        assert_eq!(mult_order(2, 3), 2);
        assert_eq!(mult_order(2, 5), 4);
        assert_eq!(mult_order(2, 7), 3);
    }

    #[test]
    fn cyclotomic_polys() {
        let c3: Vec<i64> = cyclotomic_poly(3).iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(c3, vec![1, 1, 1]);
        let c4: Vec<i64> = cyclotomic_poly(4).iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(c4, vec![1, 0, 1]);
        let c12: Vec<i64> = cyclotomic_poly(12).iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(c12, vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn primes_in_progressions() {
        let l = prime_in_progression(12, 1_000_000);
        assert!(l > 1_000_000 && l % 12 == 1 && is_prime(l));
    }
}
