//! Field constructors: ℚ, number fields ℚ[x]/(m), prime fields 𝔽_p and
//! extension fields 𝔽_{p^s} (the latter with discrete-log multiplication
//! tables for fast bulk linear algebra).

use super::{cyclotomic_poly, is_prime};
use crate::{Error, Result};
use num::{BigInt, BigRational, One, Signed, Zero};

/// Declarative description of a supported coefficient field.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum FieldSpec {
    /// The rational numbers.
    Rationals,
    /// ℚ[x]/(m) for a monic irreducible m (coefficients low → high).
    NumberField { min_poly: Vec<BigRational> },
    /// 𝔽_p, p prime.
    PrimeField { p: u64 },
    /// 𝔽_{p^s}; a monic irreducible min_poly over 𝔽_p may be supplied,
    /// otherwise one is found by search.
    ExtensionField { p: u64, s: u32, min_poly: Option<Vec<u64>> },
}

/// A field element. Variants must match the owning [`Field`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FVal {
    Rat(BigRational),
    /// Number-field element as coefficient vector of length deg(min_poly).
    Num(Vec<BigRational>),
    Fp(u64),
    /// Extension-field element as an index packing base-p digits
    /// (c₀ + c₁·p + c₂·p² + …).
    Fq(u32),
}

/// A handle providing arithmetic for one of the supported fields.
#[derive(Debug, Clone)]
pub enum Field {
    Rationals,
    Number(NumberField),
    Prime(PrimeField),
    Ext(ExtField),
}

/// ℚ[x]/(min_poly) with exact rational coefficient arithmetic.
#[derive(Debug, Clone)]
pub struct NumberField {
    /// Monic minimal polynomial, low → high, length degree+1.
    pub min_poly: Vec<BigRational>,
}

/// 𝔽_p with u64 arithmetic.
#[derive(Debug, Clone)]
pub struct PrimeField {
    pub p: u64,
}

/// 𝔽_{p^s} with exp/log tables over a fixed monic irreducible.
#[derive(Debug, Clone)]
pub struct ExtField {
    pub p: u64,
    pub s: u32,
    /// Field order p^s.
    pub q: u64,
    /// Monic irreducible polynomial over 𝔽_p, low → high, length s+1.
    pub min_poly: Vec<u64>,
    /// exp[i] = g^i for a fixed generator g, i ∈ [0, q−1).
    exp: Vec<u32>,
    /// log[e] = i with exp[i] = e, for e ≠ 0; log[0] unused.
    log: Vec<u32>,
}

/// Maximum extension-field order for which tables are built.
const EXT_TABLE_CAP: u64 = 1 << 22;

impl FieldSpec {
    /// Validate the spec and build an arithmetic handle.
    pub fn build(&self) -> Result<Field> {
        match self {
            FieldSpec::Rationals => Ok(Field::Rationals),
            FieldSpec::NumberField { min_poly } => {
                NumberField::new(min_poly.clone()).map(Field::Number)
            }
            FieldSpec::PrimeField { p } => {
                if !is_prime(*p) {
                    return Err(Error::FieldSpec(format!("{p} is not prime")));
                }
                Ok(Field::Prime(PrimeField { p: *p }))
            }
            FieldSpec::ExtensionField { p, s, min_poly } => {
                ExtField::new(*p, *s, min_poly.clone()).map(Field::Ext)
            }
        }
    }
}

impl NumberField {
    pub fn new(min_poly: Vec<BigRational>) -> Result<Self> {
        let d = min_poly.len().saturating_sub(1);
        if d == 0 {
            return Err(Error::FieldSpec("min_poly must have degree >= 1".into()));
        }
        if !min_poly[d].is_one() {
            return Err(Error::FieldSpec("min_poly must be monic".into()));
        }
        let nf = NumberField { min_poly };
        if d >= 2 && !nf.is_irreducible() {
            return Err(Error::FieldSpec("min_poly is reducible".into()));
        }
        Ok(nf)
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    /// Irreducibility over ℚ for the small degrees in use (≤ 4): no rational
    /// root (degrees 2, 3) and, for degree 4, additionally no monic quadratic
    /// factor with rational coefficients (resolvent-free direct search on the
    /// factor coefficient equations).
    fn is_irreducible(&self) -> bool {
        let d = self.degree();
        if d <= 1 {
            return true;
        }
        // Clear denominators to an integer polynomial for root search.
        let mut den = BigInt::one();
        for c in &self.min_poly {
            den = num::Integer::lcm(&den, c.denom());
        }
        let ipoly: Vec<BigInt> = self.min_poly.iter().map(|c| (c * BigRational::from(den.clone())).to_integer()).collect();
        if has_rational_root(&ipoly) {
            return false;
        }
        if d <= 3 {
            return true;
        }
        if d == 4 {
            return !monic_quartic_has_quadratic_factor(&self.min_poly);
        }
        // Degrees ≥ 5 are outside the supported range; be conservative.
        false
    }

    pub fn zero(&self) -> Vec<BigRational> {
        vec![BigRational::zero(); self.degree()]
    }

    pub fn one(&self) -> Vec<BigRational> {
        let mut v = self.zero();
        v[0] = BigRational::one();
        v
    }

    /// The class of x (a root of min_poly).
    pub fn gen(&self) -> Vec<BigRational> {
        let mut v = self.zero();
        if self.degree() >= 2 {
            v[1] = BigRational::one();
        } else {
            // degree-1 field is ℚ itself; x ≡ −c₀.
            v[0] = -self.min_poly[0].clone();
        }
        v
    }

    pub fn add(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn neg(&self, a: &[BigRational]) -> Vec<BigRational> {
        a.iter().map(|x| -x).collect()
    }

    pub fn mul(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let d = self.degree();
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        // Reduce modulo the monic min_poly.
        for k in (d..prod.len()).rev() {
            let c = std::mem::replace(&mut prod[k], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            for j in 0..d {
                let t = &c * &self.min_poly[j];
                prod[k - d + j] -= t;
            }
        }
        prod.truncate(d);
        prod
    }

    pub fn inv(&self, a: &[BigRational]) -> Vec<BigRational> {
        // Extended Euclid in ℚ[x] against min_poly.
        let mut r0: Vec<BigRational> = self.min_poly.clone();
        let mut r1: Vec<BigRational> = trim(a.to_vec());
        assert!(!r1.is_empty(), "inverse of zero");
        let mut t0: Vec<BigRational> = vec![];
        let mut t1: Vec<BigRational> = vec![BigRational::one()];
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let t = poly_sub(&t0, &poly_mul(&q, &t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = trim(t);
        }
        // r0 is the gcd; it must be a nonzero constant since min_poly is
        // irreducible and a ≠ 0.
        assert!(r0.len() == 1, "element not invertible (reducible modulus?)");
        let c = r0[0].clone();
        let mut out = vec![BigRational::zero(); self.degree()];
        for (i, v) in t0.iter().enumerate() {
            if i < out.len() {
                out[i] = v / &c;
            }
        }
        out
    }
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect()
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_divmod(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let den = den.to_vec();
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (vec![], trim(rem));
    }
    let lead = den[dd].clone();
    let mut quo = vec![BigRational::zero(); rem.len() - dd];
    for i in (0..quo.len()).rev() {
        let c = &rem[i + dd] / &lead;
        if c.is_zero() {
            continue;
        }
        quo[i] = c.clone();
        for j in 0..=dd {
            let t = &c * &den[j];
            rem[i + j] -= t;
        }
    }
    (quo, trim(rem))
}

fn has_rational_root(ipoly: &[BigInt]) -> bool {
    // Rational root theorem: p/q with p | constant, q | leading.
    let poly = {
        let mut v = ipoly.to_vec();
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    };
    if poly.len() <= 1 {
        return false;
    }
    if poly[0].is_zero() {
        return true; // x divides the polynomial → root 0
    }
    let c0 = poly[0].abs();
    let lead = poly.last().unwrap().abs();
    let divisors = |n: &BigInt| -> Vec<BigInt> {
        let mut out = vec![];
        let mut d = BigInt::one();
        while &d * &d <= *n {
            if (n % &d).is_zero() {
                out.push(d.clone());
                out.push(n / &d);
            }
            d += 1;
        }
        out
    };
    for p in divisors(&c0) {
        for q in divisors(&lead) {
            for sign in [1i32, -1] {
                let r = BigRational::new(p.clone() * sign, q.clone());
                let mut acc = BigRational::zero();
                for c in poly.iter().rev() {
                    acc = acc * &r + BigRational::from(c.clone());
                }
                if acc.is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

/// Check whether a monic rational quartic factors into two monic quadratics
/// over ℚ, by solving the coefficient equations through the resolvent cubic's
/// rational roots.
fn monic_quartic_has_quadratic_factor(m: &[BigRational]) -> bool {
    // m = x⁴ + a x³ + b x² + c x + d (after normalizing, already monic).
    let a = m[3].clone();
    let b = m[2].clone();
    let c = m[1].clone();
    let d = m[0].clone();
    // (x² + px + q)(x² + rx + s): p + r = a, q + s + pr = b, ps + qr = c, qs = d.
    // Eliminate to the resolvent cubic in u = q + s:
    //   u³ − b u² + (ac − 4d) u − (a²d − 4bd + c²) = 0 ... use rational-root search.
    let one = BigRational::one();
    let poly = [
        -(&a * &a * &d - BigRational::from(BigInt::from(4)) * &b * &d + &c * &c),
        &a * &c - BigRational::from(BigInt::from(4)) * &d,
        -b.clone(),
        one,
    ];
    // Clear denominators.
    let mut den = BigInt::one();
    for coeff in &poly {
        den = num::Integer::lcm(&den, coeff.denom());
    }
    let ipoly: Vec<BigInt> = poly.iter().map(|x| (x * BigRational::from(den.clone())).to_integer()).collect();
    // For each rational root u of the resolvent, check if p² = a²−4(b−u) and
    // the remaining system admits rational solutions.
    let rational_roots = |ipoly: &[BigInt]| -> Vec<BigRational> {
        let mut roots = vec![];
        let poly = ipoly.to_vec();
        if poly[0].is_zero() {
            roots.push(BigRational::zero());
        }
        let c0 = if poly[0].is_zero() { BigInt::one() } else { poly[0].abs() };
        let lead = poly.last().unwrap().abs();
        let divs = |n: &BigInt| -> Vec<BigInt> {
            let mut out = vec![];
            let mut dd = BigInt::one();
            while &dd * &dd <= *n {
                if (n % &dd).is_zero() {
                    out.push(dd.clone());
                    out.push(n / &dd);
                }
                dd += 1;
            }
            out
        };
        for p in divs(&c0) {
            for q in divs(&lead) {
                for sign in [1i32, -1] {
                    let r = BigRational::new(p.clone() * sign, q.clone());
                    let mut acc = BigRational::zero();
                    for coeff in poly.iter().rev() {
                        acc = acc * &r + BigRational::from(coeff.clone());
                    }
                    if acc.is_zero() && !roots.contains(&r) {
                        roots.push(r.clone());
                    }
                }
            }
        }
        roots
    };
    for u in rational_roots(&ipoly) {
        // p² = a² − 4(b − u); need p rational, then q,s from q+s = u, qs = d,
        // ps + qr = c with r = a − p.
        let p2 = &a * &a - BigRational::from(BigInt::from(4)) * (&b - &u);
        if let Some(p) = rational_sqrt(&p2) {
            for pv in [p.clone(), -p] {
                let r = &a - &pv;
                // q + s = u; ps + qr = c ⇒ q(r−p) = c − p·u ⇒ if r ≠ p solve:
                let diff = &r - &pv;
                let (q, s);
                if !diff.is_zero() {
                    q = (&c - &pv * &u) / diff;
                    s = &u - &q;
                } else {
                    // p = r: need q+s = u, qs = d; q,s roots of y² − uy + d.
                    let disc = &u * &u - BigRational::from(BigInt::from(4)) * &d;
                    match rational_sqrt(&disc) {
                        Some(sq) => {
                            q = (&u + &sq) / BigRational::from(BigInt::from(2));
                            s = &u - &q;
                        }
                        None => continue,
                    }
                }
                if &q * &s == d && &pv * &s + &q * &r == c {
                    return true;
                }
            }
        }
    }
    false
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let ns = x.numer().sqrt();
    let ds = x.denom().sqrt();
    if &(&ns * &ns) == x.numer() && &(&ds * &ds) == x.denom() {
        Some(BigRational::new(ns, ds))
    } else {
        None
    }
}

impl ExtField {
    pub fn new(p: u64, s: u32, min_poly: Option<Vec<u64>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::FieldSpec(format!("{p} is not prime")));
        }
        if s == 0 || s > 8 {
            return Err(Error::FieldSpec("extension degree must be 1..=8".into()));
        }
        let q = p.checked_pow(s).ok_or_else(|| Error::FieldSpec("field too large".into()))?;
        if q > EXT_TABLE_CAP {
            return Err(Error::FieldSpec(format!("extension field order {q} beyond table cap")));
        }
        let min_poly = match min_poly {
            Some(mp) => {
                if mp.len() != s as usize + 1 || mp[s as usize] % p != 1 {
                    return Err(Error::FieldSpec("min_poly must be monic of degree s".into()));
                }
                let mp: Vec<u64> = mp.iter().map(|c| c % p).collect();
                if !poly_irreducible_fp(&mp, p) {
                    return Err(Error::FieldSpec("min_poly is reducible over F_p".into()));
                }
                mp
            }
            None => find_irreducible_fp(p, s),
        };
        let mut f = ExtField { p, s, q, min_poly, exp: vec![], log: vec![] };
        f.build_tables()?;
        Ok(f)
    }

    fn build_tables(&mut self) -> Result<()> {
        let q = self.q as usize;
        // Find a generator of the cyclic unit group by direct order checks.
        'cand: for g in 1..self.q {
            if g == 0 {
                continue;
            }
            let mut exp = Vec::with_capacity(q - 1);
            let mut log = vec![u32::MAX; q];
            let mut acc = 1u64; // packed representation of 1
            for i in 0..(q - 1) {
                if log[acc as usize] != u32::MAX {
                    continue 'cand; // order < q−1
                }
                exp.push(acc as u32);
                log[acc as usize] = i as u32;
                acc = self.mul_packed(acc, g);
            }
            if acc != 1 {
                continue;
            }
            self.exp = exp;
            self.log = log;
            return Ok(());
        }
        Err(Error::FieldSpec("no multiplicative generator found".into()))
    }

    #[inline]
    fn unpack(&self, mut e: u64) -> [u64; 9] {
        let mut digits = [0u64; 9];
        for d in digits.iter_mut().take(self.s as usize) {
            *d = e % self.p;
            e /= self.p;
        }
        digits
    }

    #[inline]
    fn pack(&self, digits: &[u64]) -> u64 {
        let mut e = 0u64;
        for &d in digits.iter().rev() {
            e = e * self.p + d % self.p;
        }
        e
    }

    /// Polynomial multiplication of packed elements modulo min_poly (used only
    /// to build tables; runtime multiplication goes through exp/log).
    fn mul_packed(&self, a: u64, b: u64) -> u64 {
        let s = self.s as usize;
        let da = self.unpack(a);
        let db = self.unpack(b);
        let mut prod = [0u64; 17];
        for i in 0..s {
            if da[i] == 0 {
                continue;
            }
            for j in 0..s {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % self.p;
            }
        }
        for k in (s..2 * s - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..s {
                let t = (c * self.min_poly[j]) % self.p;
                prod[k - s + j] = (prod[k - s + j] + self.p - t) % self.p;
            }
        }
        self.pack(&prod[..s])
    }

    #[inline(always)]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let da = self.unpack(a as u64);
        let db = self.unpack(b as u64);
        let mut out = [0u64; 9];
        for i in 0..self.s as usize {
            out[i] = (da[i] + db[i]) % self.p;
        }
        self.pack(&out[..self.s as usize]) as u32
    }

    #[inline(always)]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let da = self.unpack(a as u64);
        let mut out = [0u64; 9];
        for i in 0..self.s as usize {
            out[i] = (self.p - da[i]) % self.p;
        }
        self.pack(&out[..self.s as usize]) as u32
    }

    #[inline(always)]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline(always)]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let i = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(i % (self.q - 1)) as usize]
    }

    #[inline(always)]
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let i = self.log[a as usize] as u64;
        self.exp[((self.q - 1 - i) % (self.q - 1)) as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let i = self.log[a as usize] as u128 * e as u128 % (self.q - 1) as u128;
        self.exp[i as usize]
    }

    /// An element of exact multiplicative order n (requires n | q−1).
    pub fn element_of_order(&self, n: u64) -> Result<u32> {
        if n == 0 || (self.q - 1) % n != 0 {
            return Err(Error::FieldSpec(format!(
                "no element of order {n} in field of order {}",
                self.q
            )));
        }
        Ok(self.exp[((self.q - 1) / n) as usize])
    }

    /// Embed an integer via the prime subfield.
    pub fn from_i64(&self, v: i64) -> u32 {
        (v.rem_euclid(self.p as i64)) as u32
    }
}

fn poly_irreducible_fp(poly: &[u64], p: u64) -> bool {
    let s = poly.len() - 1;
    if s == 1 {
        return true;
    }
    // Trial division by all monic polynomials of degree 1..=s/2.
    for d in 1..=s / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            // monic divisor of degree d encoded base p
            let mut div = vec![0u64; d + 1];
            let mut e = idx;
            for c in div.iter_mut().take(d) {
                *c = e % p;
                e /= p;
            }
            div[d] = 1;
            if poly_rem_is_zero_fp(poly, &div, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero_fp(num: &[u64], den: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = num.to_vec();
    let dd = den.len() - 1;
    for i in (dd..rem.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        for j in 0..=dd {
            let t = (c * den[j]) % p;
            rem[i - dd + j] = (rem[i - dd + j] + p - t) % p;
        }
    }
    rem.iter().take(dd).all(|&c| c == 0)
}

fn find_irreducible_fp(p: u64, s: u32) -> Vec<u64> {
    let s = s as usize;
    if s == 1 {
        return vec![0, 1];
    }
    let count = p.pow(s as u32);
    for idx in 0..count {
        let mut poly = vec![0u64; s + 1];
        let mut e = idx;
        for c in poly.iter_mut().take(s) {
            *c = e % p;
            e /= p;
        }
        poly[s] = 1;
        if poly_irreducible_fp(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

impl Field {
    /// ℚ(ζ_n): the cyclotomic field of the n-th roots of unity.
    pub fn cyclotomic(n: u64) -> Result<Field> {
        let phi = cyclotomic_poly(n);
        let min_poly: Vec<BigRational> = phi.into_iter().map(BigRational::from).collect();
        Ok(Field::Number(NumberField::new(min_poly)?))
    }

    pub fn zero(&self) -> FVal {
        match self {
            Field::Rationals => FVal::Rat(BigRational::zero()),
            Field::Number(nf) => FVal::Num(nf.zero()),
            Field::Prime(_) => FVal::Fp(0),
            Field::Ext(_) => FVal::Fq(0),
        }
    }

    pub fn one(&self) -> FVal {
        match self {
            Field::Rationals => FVal::Rat(BigRational::one()),
            Field::Number(nf) => FVal::Num(nf.one()),
            Field::Prime(_) => FVal::Fp(1),
            Field::Ext(_) => FVal::Fq(1),
        }
    }

    pub fn is_zero(&self, a: &FVal) -> bool {
        match a {
            FVal::Rat(x) => x.is_zero(),
            FVal::Num(v) => v.iter().all(|c| c.is_zero()),
            FVal::Fp(x) => *x == 0,
            FVal::Fq(x) => *x == 0,
        }
    }

    pub fn add(&self, a: &FVal, b: &FVal) -> FVal {
        match (self, a, b) {
            (Field::Rationals, FVal::Rat(x), FVal::Rat(y)) => FVal::Rat(x + y),
            (Field::Number(nf), FVal::Num(x), FVal::Num(y)) => FVal::Num(nf.add(x, y)),
            (Field::Prime(f), FVal::Fp(x), FVal::Fp(y)) => FVal::Fp((x + y) % f.p),
            (Field::Ext(f), FVal::Fq(x), FVal::Fq(y)) => FVal::Fq(f.add(*x, *y)),
            _ => panic!("mixed-field operands"),
        }
    }

    pub fn sub(&self, a: &FVal, b: &FVal) -> FVal {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &FVal) -> FVal {
        match (self, a) {
            (Field::Rationals, FVal::Rat(x)) => FVal::Rat(-x),
            (Field::Number(nf), FVal::Num(x)) => FVal::Num(nf.neg(x)),
            (Field::Prime(f), FVal::Fp(x)) => FVal::Fp((f.p - x) % f.p),
            (Field::Ext(f), FVal::Fq(x)) => FVal::Fq(f.neg(*x)),
            _ => panic!("mixed-field operands"),
        }
    }

    pub fn mul(&self, a: &FVal, b: &FVal) -> FVal {
        match (self, a, b) {
            (Field::Rationals, FVal::Rat(x), FVal::Rat(y)) => FVal::Rat(x * y),
            (Field::Number(nf), FVal::Num(x), FVal::Num(y)) => FVal::Num(nf.mul(x, y)),
            (Field::Prime(f), FVal::Fp(x), FVal::Fp(y)) => {
                FVal::Fp(super::mul_mod(*x, *y, f.p))
            }
            (Field::Ext(f), FVal::Fq(x), FVal::Fq(y)) => FVal::Fq(f.mul(*x, *y)),
            _ => panic!("mixed-field operands"),
        }
    }

    pub fn inv(&self, a: &FVal) -> FVal {
        assert!(!self.is_zero(a), "inverse of zero");
        match (self, a) {
            (Field::Rationals, FVal::Rat(x)) => FVal::Rat(x.recip()),
            (Field::Number(nf), FVal::Num(x)) => FVal::Num(nf.inv(x)),
            (Field::Prime(f), FVal::Fp(x)) => FVal::Fp(super::inv_mod(*x, f.p)),
            (Field::Ext(f), FVal::Fq(x)) => FVal::Fq(f.inv(*x)),
            _ => panic!("mixed-field operands"),
        }
    }

    pub fn div(&self, a: &FVal, b: &FVal) -> FVal {
        self.mul(a, &self.inv(b))
    }

    pub fn pow(&self, a: &FVal, e: u64) -> FVal {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn from_i64(&self, v: i64) -> FVal {
        match self {
            Field::Rationals => FVal::Rat(BigRational::from(BigInt::from(v))),
            Field::Number(nf) => {
                let mut out = nf.zero();
                out[0] = BigRational::from(BigInt::from(v));
                FVal::Num(out)
            }
            Field::Prime(f) => FVal::Fp(v.rem_euclid(f.p as i64) as u64),
            Field::Ext(f) => FVal::Fq(f.from_i64(v)),
        }
    }

    /// Field order for finite fields; None for infinite ones.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Prime(f) => Some(f.p),
            Field::Ext(f) => Some(f.q),
            _ => None,
        }
    }

    /// All elements (finite fields only).
    pub fn enumerate(&self) -> Result<Vec<FVal>> {
        match self {
            Field::Prime(f) => Ok((0..f.p).map(FVal::Fp).collect()),
            Field::Ext(f) => Ok((0..f.q).map(|i| FVal::Fq(i as u32)).collect()),
            _ => Err(Error::Unsupported("enumeration of an infinite field".into())),
        }
    }

    /// An element of exact multiplicative order n, for finite fields with
    /// n | q−1.
    pub fn element_of_order(&self, n: u64) -> Result<FVal> {
        match self {
            Field::Prime(f) => {
                if (f.p - 1) % n != 0 {
                    return Err(Error::FieldSpec(format!("no order-{n} element in F_{}", f.p)));
                }
                // Find a generator of F_p* then power up.
                let mut g = 2;
                let gen = loop {
                    if is_generator_mod_p(g, f.p) {
                        break g;
                    }
                    g += 1;
                };
                Ok(FVal::Fp(super::pow_mod(gen, (f.p - 1) / n, f.p)))
            }
            Field::Ext(f) => Ok(FVal::Fq(f.element_of_order(n)?)),
            Field::Number(nf) => {
                // In ℚ(ζ_n) (minimal polynomial Φ_n) the class of x is a
                // primitive n-th root of unity; verify that this field is
                // such a cyclotomic field before handing it out.
                let mut x = nf.zero();
                if nf.degree() >= 2 {
                    x[1] = BigRational::one();
                } else {
                    x[0] = -BigRational::one(); // degree 1: ζ₂ = −1 (Φ₂ = x+1)
                }
                let zeta = FVal::Num(x);
                if self.pow(&zeta, n) != self.one() {
                    return Err(Error::Unsupported(
                        "number field is not the matching cyclotomic field".into(),
                    ));
                }
                for d in 1..n {
                    if n % d == 0 && self.pow(&zeta, d) == self.one() {
                        return Err(Error::Unsupported(
                            "generator has smaller order than requested".into(),
                        ));
                    }
                }
                Ok(zeta)
            }
            Field::Rationals => {
                if n == 2 {
                    Ok(self.from_i64(-1))
                } else {
                    Err(Error::Unsupported("ℚ contains only ±1 as roots of unity".into()))
                }
            }
        }
    }
}

fn is_generator_mod_p(g: u64, p: u64) -> bool {
    // g generates F_p* iff g^((p−1)/r) ≠ 1 for all prime r | p−1.
    let mut m = p - 1;
    let mut primes = vec![];
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            primes.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    primes.iter().all(|&r| super::pow_mod(g, (p - 1) / r, p) != 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_torsion_units() {
        let f = FieldSpec::ExtensionField { p: 2, s: 2, min_poly: None }.build().unwrap();
        let xi = f.element_of_order(3).unwrap();
        assert_ne!(xi, f.one());
        assert_eq!(f.pow(&xi, 3), f.one());
        // units {1, ξ, ξ²} are exactly the 3-torsion
        let sq = f.mul(&xi, &xi);
        assert_ne!(sq, xi);
        assert_eq!(f.mul(&sq, &xi), f.one());
    }

    #[test]
    fn f2_has_trivial_units() {
        let f = FieldSpec::PrimeField { p: 2 }.build().unwrap();
        assert!(f.element_of_order(2).is_err());
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(FieldSpec::PrimeField { p: 6 }.build().is_err());
        // x² − 1 is reducible
        let mp = vec![
            BigRational::from(BigInt::from(-1)),
            BigRational::zero(),
            BigRational::from(BigInt::from(1)),
        ];
        assert!(FieldSpec::NumberField { min_poly: mp }.build().is_err());
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for spec in [
            FieldSpec::PrimeField { p: 5 },
            FieldSpec::ExtensionField { p: 2, s: 2, min_poly: None },
            FieldSpec::ExtensionField { p: 3, s: 2, min_poly: None },
            FieldSpec::ExtensionField { p: 2, s: 3, min_poly: None },
        ] {
            let f = spec.build().unwrap();
            let elems = f.enumerate().unwrap();
            assert_eq!(elems.len() as u64, f.order().unwrap());
            for a in &elems {
                // unit group exponent
                if !f.is_zero(a) {
                    assert_eq!(f.pow(a, f.order().unwrap() - 1), f.one());
                    assert_eq!(f.mul(a, &f.inv(a)), f.one());
                }
                for b in &elems {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in &elems {
                        assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
                        assert_eq!(
                            f.add(&f.add(a, b), c),
                            f.add(a, &f.add(b, c))
                        );
                        assert_eq!(
                            f.mul(&f.mul(a, b), c),
                            f.mul(a, &f.mul(b, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn cyclotomic_field_arithmetic() {
        // ℚ(ω), ω² + ω + 1 = 0: check ω³ = 1 and (1+ω) = −ω².
        let f = Field::cyclotomic(3).unwrap();
        let w = match &f {
            Field::Number(nf) => FVal::Num(nf.gen()),
            _ => unreachable!(),
        };
        assert_eq!(f.pow(&w, 3), f.one());
        let w2 = f.mul(&w, &w);
        let sum = f.add(&f.one(), &w);
        assert_eq!(sum, f.neg(&w2));
        assert_eq!(f.mul(&w, &f.inv(&w)), f.one());
    }
}
