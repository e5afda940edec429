//! Sparse multivariate Laurent polynomials with integer coefficients,
//! the coefficient ring for Alexander matrices ℤ[t₁^{±1}, …, t_n^{±1}].

use num::BigInt;
use num::{One, Zero};
use smallvec::SmallVec;
use std::collections::BTreeMap;

/// Exponent vector; most arrangements have ≤ 16 lines so inline storage
/// covers the common case.
pub type Expo = SmallVec<[i16; 16]>;

/// A sparse Laurent polynomial in `nvars` variables over ℤ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Laurent {
    pub nvars: usize,
    /// exponent vector → nonzero coefficient
    pub terms: BTreeMap<Expo, BigInt>,
}

impl Laurent {
    pub fn zero(nvars: usize) -> Self {
        Laurent { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Expo::from_elem(0, nvars), c);
        }
        p
    }

    /// The monomial tᵢ^e (0-based variable index).
    pub fn monomial(nvars: usize, i: usize, e: i16) -> Self {
        assert!(i < nvars);
        let mut expo = Expo::from_elem(0, nvars);
        expo[i] = e;
        let mut p = Self::zero(nvars);
        p.terms.insert(expo, BigInt::one());
        p
    }

    /// The variable tᵢ (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, i, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, expo: Expo, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(expo) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Laurent {
        Laurent {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Laurent::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let mut e: Expo = e1.clone();
                for (a, b) in e.iter_mut().zip(e2.iter()) {
                    *a += b;
                }
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// Multiply by the monomial tᵢ^e in place.
    pub fn shift(&mut self, i: usize, e: i16) {
        let old = std::mem::take(&mut self.terms);
        for (mut expo, c) in old {
            expo[i] += e;
            self.terms.insert(expo, c);
        }
    }

    /// Evaluate at a point of (K*)ⁿ: substitute `vals[i]` for tᵢ. All values
    /// must be invertible when negative exponents occur.
    pub fn eval(&self, f: &super::Field, vals: &[super::FVal]) -> super::FVal {
        assert_eq!(vals.len(), self.nvars);
        let mut acc = f.zero();
        for (expo, coeff) in &self.terms {
            let mut term = int_to_field(f, coeff);
            for (i, &e) in expo.iter().enumerate() {
                if e > 0 {
                    term = f.mul(&term, &f.pow(&vals[i], e as u64));
                } else if e < 0 {
                    term = f.mul(&term, &f.pow(&f.inv(&vals[i]), (-e) as u64));
                }
            }
            acc = f.add(&acc, &term);
        }
        acc
    }

    pub fn total_degree_range(&self) -> (i16, i16) {
        let mut lo = i16::MAX;
        let mut hi = i16::MIN;
        for e in self.terms.keys() {
            let d: i16 = e.iter().sum();
            lo = lo.min(d);
            hi = hi.max(d);
        }
        if lo > hi {
            (0, 0)
        } else {
            (lo, hi)
        }
    }
}

/// Map an integer into any supported field.
pub fn int_to_field(f: &super::Field, c: &BigInt) -> super::FVal {
    use super::{FVal, Field};
    match f {
        Field::Rationals => FVal::Rat(num::BigRational::from(c.clone())),
        Field::Number(nf) => {
            let mut v = nf.zero();
            v[0] = num::BigRational::from(c.clone());
            FVal::Num(v)
        }
        Field::Prime(pf) => {
            let r = c % BigInt::from(pf.p);
            let r = if r < BigInt::zero() { r + BigInt::from(pf.p) } else { r };
            FVal::Fp(u64::try_from(r).unwrap())
        }
        Field::Ext(ef) => {
            let r = c % BigInt::from(ef.p);
            let r = if r < BigInt::zero() { r + BigInt::from(ef.p) } else { r };
            FVal::Fq(u32::try_from(r).unwrap())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_identities() {
        let n = 3;
        let t0 = Laurent::var(n, 0);
        let t1 = Laurent::var(n, 1);
        let one = Laurent::one(n);
        // (t0 + t1)(t0 − t1) = t0² − t1²
        let lhs = t0.add(&t1).mul(&t0.sub(&t1));
        let rhs = t0.mul(&t0).sub(&t1.mul(&t1));
        assert_eq!(lhs, rhs);
        // t0 · t0⁻¹ = 1
        let t0inv = Laurent::monomial(n, 0, -1);
        assert_eq!(t0.mul(&t0inv), one);
        // cancellation to zero
        assert_eq!(t0.sub(&t0), Laurent::zero(n));
    }

    #[test]
    fn shift_matches_monomial_mul() {
        let n = 2;
        let p = Laurent::var(n, 0).add(&Laurent::one(n));
        let mut shifted = p.clone();
        shifted.shift(1, -2);
        assert_eq!(shifted, p.mul(&Laurent::monomial(n, 1, -2)));
    }
}
