//! Cohomology jumping loci: characteristic varieties V_d (via rank drops of
//! the Alexander matrix at characters) and resonance varieties R_d (via the
//! linearized matrix), depth computation over finite fields and in
//! characteristic zero, torsion-point counting (β-invariants), resonance
//! counting (ν-invariants), and decomposition of R₁ into linear components.

use crate::arrangement::{Arrangement, IntersectionLattice};
use crate::braidgroup::GroupPresentation;
use crate::exactalg::{
    euler_phi, mult_order, prime_in_progression, rank_generic, FVal, Field, FieldSpec,
};
use crate::foxcalc::{
    alexander_matrix, evaluate_matrix, linearize, AlexanderMatrix, LinearizedMatrix,
};
use crate::{Error, Result};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::BTreeMap;

/// Default cap on enumerated characters.
pub const DEFAULT_BUDGET: u64 = 1 << 25;

/// The evaluation engine for one group: its Alexander matrix and the
/// linearization, plus an integer-coefficient copy of the latter for fast
/// modular evaluation.
#[derive(Debug, Clone)]
pub struct JumpingLoci {
    pub n: usize,
    pub alex: AlexanderMatrix,
    pub lin: LinearizedMatrix,
    /// lin coefficients as machine integers: lin_int[r][c][j] = coefficient
    /// of λ_j in entry (r, c).
    lin_int: Vec<Vec<Vec<i64>>>,
}

impl JumpingLoci {
    pub fn from_presentation(pres: &GroupPresentation) -> Self {
        let alex = alexander_matrix(pres);
        let lin = linearize(&alex);
        let lin_int = lin
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        e.iter()
                            .map(|c| i64::try_from(c).expect("linearized coefficient overflow"))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        JumpingLoci { n: pres.ngens, alex, lin, lin_int }
    }

    pub fn from_arrangement(arr: &Arrangement, seed: Option<u64>) -> Result<Self> {
        let pres = crate::braidgroup::group_presentation(arr, seed)?;
        Ok(Self::from_presentation(&pres))
    }

    /// Depth of a nontrivial character t over a field:
    /// max{d : t ∈ V_d} = n − 1 − rank A_G(t).
    pub fn depth_at(&self, f: &Field, t: &[FVal]) -> Result<usize> {
        if t.iter().all(|v| *v == f.one()) {
            return Err(Error::Unsupported(
                "depth of the trivial character is undefined; use b₁ directly".into(),
            ));
        }
        let mat = evaluate_matrix(&self.alex, f, t);
        let rank = rank_generic(f, &mat);
        debug_assert!(rank < self.n);
        Ok(self.n - 1 - rank)
    }

    /// Resonance depth of a nonzero λ over a field:
    /// max{d : λ ∈ R_d} = n − 1 − rank Ā(λ).
    pub fn lin_depth_at(&self, f: &Field, lambda: &[FVal]) -> usize {
        let mat = crate::foxcalc::evaluate_linearized(&self.lin, f, lambda);
        let rank = rank_generic(f, &mat);
        self.n - 1 - rank
    }

    /// Fast path: resonance rank of λ ∈ 𝔽_pⁿ (machine-prime p).
    pub fn lin_rank_mod_p(&self, lambda: &[u64], p: u64) -> usize {
        let mut rows: Vec<Vec<u64>> = self
            .lin_int
            .iter()
            .map(|row| {
                row.iter()
                    .map(|lin| {
                        let mut acc: i128 = 0;
                        for (j, &c) in lin.iter().enumerate() {
                            acc += c as i128 * lambda[j] as i128;
                        }
                        acc.rem_euclid(p as i128) as u64
                    })
                    .collect()
            })
            .collect();
        crate::exactalg::rank_mod_p(&mut rows, p)
    }
}

/// How many characters of each exact depth were seen: d ↦ count.
pub type DepthProfile = BTreeMap<usize, u64>;

// ===========================================================================
// β-invariants: p-torsion characters over a field of characteristic q ≠ p
// ===========================================================================

/// The field used for p-torsion depth in characteristic q ≠ p:
/// 𝔽_{q^{ord_p(q)}} (the smallest field of characteristic q containing the
/// p-th roots of unity).
pub fn torsion_field(p: u64, q: u64) -> Result<Field> {
    if q == 0 || q == p || !crate::exactalg::is_prime(q) {
        return Err(Error::FieldSpec(format!(
            "β_(p,d)^(q) needs q = 0 or a prime different from p; got p={p}, q={q}"
        )));
    }
    let s = mult_order(q, p);
    if s == 1 {
        FieldSpec::PrimeField { p: q }.build()
    } else {
        FieldSpec::ExtensionField { p: q, s, min_poly: None }.build()
    }
}

/// β_{p,d}^{(q)}(G) for d ≥ 1: the number of index-p normal subgroups whose
/// mod-q first Betti number jumps by (p−1)d, computed as
/// #{t ≠ 1, tᵖ = 1, depth exactly d} / (p−1). For q = 0 the depths are
/// characteristic-zero depths (see [`depth_char0`]).
pub fn beta_invariants(jl: &JumpingLoci, p: u64, q: u64, budget: u64) -> Result<DepthProfile> {
    let n = jl.n;
    let total = pow_checked(p, n as u32, budget)?;
    let mut profile = DepthProfile::new();
    if q == 0 {
        let eng = Char0Engine::new(jl, p)?;
        let mut e = vec![0u64; n];
        for _ in 1..total {
            incr(&mut e, p);
            let d = eng.depth(jl, &e)?;
            *profile.entry(d).or_insert(0) += 1;
        }
    } else {
        let f = torsion_field(p, q)?;
        match &f {
            Field::Prime(fp) => beta_profile_compiled(jl, p, fp, total, &mut profile)?,
            Field::Ext(fe) => beta_profile_compiled(jl, p, fe, total, &mut profile)?,
            _ => unreachable!("torsion_field returns a finite field"),
        }
    }
    for v in profile.values_mut() {
        debug_assert_eq!(*v % (p - 1), 0);
        *v /= p - 1;
    }
    Ok(profile)
}

/// Machine arithmetic of a small finite field, as needed by the compiled
/// torsion-character evaluator.
trait MachineField {
    type El: Copy + PartialEq + Default;
    fn one(&self) -> Self::El;
    fn add_el(&self, a: Self::El, b: Self::El) -> Self::El;
    fn mul_el(&self, a: Self::El, b: Self::El) -> Self::El;
    fn from_bigint(&self, c: &BigInt) -> Self::El;
    fn zeta(&self, order: u64) -> Result<Self::El>;
    fn rank_rows(&self, rows: &mut [Vec<Self::El>]) -> usize;
}

impl MachineField for crate::exactalg::PrimeField {
    type El = u64;
    fn one(&self) -> u64 {
        1
    }
    fn add_el(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn mul_el(&self, a: u64, b: u64) -> u64 {
        crate::exactalg::mul_mod(a, b, self.p)
    }
    fn from_bigint(&self, c: &BigInt) -> u64 {
        use num::Integer;
        use num::ToPrimitive;
        c.mod_floor(&BigInt::from(self.p)).to_u64().expect("reduced coefficient fits u64")
    }
    fn zeta(&self, order: u64) -> Result<u64> {
        match Field::Prime(self.clone()).element_of_order(order)? {
            FVal::Fp(v) => Ok(v),
            _ => unreachable!(),
        }
    }
    fn rank_rows(&self, rows: &mut [Vec<u64>]) -> usize {
        crate::exactalg::rank_mod_p(rows, self.p)
    }
}

impl MachineField for crate::exactalg::ExtField {
    type El = u32;
    fn one(&self) -> u32 {
        1
    }
    fn add_el(&self, a: u32, b: u32) -> u32 {
        self.add(a, b)
    }
    fn mul_el(&self, a: u32, b: u32) -> u32 {
        self.mul(a, b)
    }
    fn from_bigint(&self, c: &BigInt) -> u32 {
        use num::Integer;
        use num::ToPrimitive;
        let r = c.mod_floor(&BigInt::from(self.p)).to_i64().expect("reduced coefficient fits");
        self.from_i64(r)
    }
    fn zeta(&self, order: u64) -> Result<u32> {
        self.element_of_order(order)
    }
    fn rank_rows(&self, rows: &mut [Vec<u32>]) -> usize {
        crate::exactalg::rank_gf(self, rows)
    }
}

/// Enumerate all nontrivial order-p torsion characters and tally exact
/// depths into `profile`. The Alexander matrix is compiled once into flat
/// term lists (coefficient in the field, exponent vector mod p); the
/// character odometer maintains each term's exponent–character dot product
/// mod p incrementally, so one character costs one ζ-power lookup and one
/// multiply-add per term plus a small-matrix rank.
fn beta_profile_compiled<F: MachineField>(
    jl: &JumpingLoci,
    p: u64,
    f: &F,
    total: u64,
    profile: &mut DepthProfile,
) -> Result<()> {
    let n = jl.n;
    let nrows = jl.alex.rows.len();
    let zeta = f.zeta(p)?;
    let mut zpow = vec![f.one(); p as usize];
    for k in 1..p as usize {
        zpow[k] = f.mul_el(zpow[k - 1], zeta);
    }
    // Flatten terms: owner entry, field coefficient, and per-coordinate
    // exponent lists for the incremental dot products.
    let mut term_entry: Vec<u32> = Vec::new();
    let mut term_coeff: Vec<F::El> = Vec::new();
    let mut coord_terms: Vec<Vec<(u32, u16)>> = vec![Vec::new(); n];
    for (r, row) in jl.alex.rows.iter().enumerate() {
        for (c, entry) in row.iter().enumerate() {
            for (expo, coeff) in entry.terms.iter() {
                let ce = f.from_bigint(coeff);
                if ce == F::El::default() {
                    continue;
                }
                let t = term_coeff.len() as u32;
                term_coeff.push(ce);
                term_entry.push((r * n + c) as u32);
                for (j, &x) in expo.iter().enumerate() {
                    let a = (x as i64).rem_euclid(p as i64) as u16;
                    if a != 0 {
                        coord_terms[j].push((t, a));
                    }
                }
            }
        }
    }
    let nterms = term_coeff.len();
    let mut dots: Vec<u16> = vec![0; nterms];
    let mut e = vec![0u64; n];
    let pu = p as u16;
    let mut rows: Vec<Vec<F::El>> = vec![vec![F::El::default(); n]; nrows];
    for _ in 1..total {
        // Odometer step; a wrap p−1 → 0 equals +1 mod p on the dot products,
        // so every touched coordinate contributes the same update.
        let mut j = 0;
        loop {
            e[j] += 1;
            for &(t, a) in &coord_terms[j] {
                let d = dots[t as usize] + a;
                dots[t as usize] = if d >= pu { d - pu } else { d };
            }
            if e[j] < p {
                break;
            }
            e[j] = 0;
            j += 1;
        }
        for row in rows.iter_mut() {
            row.fill(F::El::default());
        }
        for t in 0..nterms {
            let idx = term_entry[t] as usize;
            let v = f.mul_el(term_coeff[t], zpow[dots[t] as usize]);
            let cell = &mut rows[idx / n][idx % n];
            *cell = f.add_el(*cell, v);
        }
        let rank = f.rank_rows(&mut rows);
        debug_assert!(rank < n);
        *profile.entry(n - 1 - rank).or_insert(0) += 1;
    }
    Ok(())
}

fn incr(e: &mut [u64], p: u64) {
    for v in e.iter_mut() {
        *v += 1;
        if *v < p {
            return;
        }
        *v = 0;
    }
}

fn pow_checked(p: u64, n: u32, budget: u64) -> Result<u64> {
    let mut acc: u64 = 1;
    for _ in 0..n {
        acc = acc
            .checked_mul(p)
            .filter(|&v| v <= budget)
            .ok_or(Error::Budget(format!("{p}^{n} characters exceed budget {budget}")))?;
    }
    Ok(acc)
}

// ===========================================================================
// ν-invariants: resonance over 𝔽_p
// ===========================================================================

/// ν_{p,d}(G) for d ≥ 1: #{λ ∈ 𝔽_pⁿ \ 0, resonance depth exactly d}/(p−1).
/// The linearized matrix is homogeneous, so depth is constant on punctured
/// lines and we enumerate projective representatives directly.
pub fn nu_invariants(jl: &JumpingLoci, p: u64, budget: u64) -> Result<DepthProfile> {
    let mut profile = DepthProfile::new();
    for_each_projective(jl.n, p, budget, |lambda| {
        let d = jl.n - 1 - jl.lin_rank_mod_p(lambda, p);
        *profile.entry(d).or_insert(0) += 1;
    })?;
    Ok(profile)
}

/// Visit one representative of each punctured line of 𝔽_pⁿ: leading
/// coordinate 1, earlier coordinates 0.
fn for_each_projective(
    n: usize,
    p: u64,
    budget: u64,
    mut visit: impl FnMut(&[u64]),
) -> Result<()> {
    let mut count: u64 = 0;
    for lead in 0..n {
        let free = (n - 1 - lead) as u32;
        let block = pow_checked(p, free, u64::MAX)?;
        count = count
            .checked_add(block)
            .filter(|&v| v <= budget)
            .ok_or(Error::Budget(format!("projective points of 𝔽_{p}^{n} exceed budget")))?;
        let mut lambda = vec![0u64; n];
        lambda[lead] = 1;
        for _ in 0..block {
            visit(&lambda);
            incr(&mut lambda[lead + 1..], p);
        }
    }
    Ok(())
}

// ===========================================================================
// Characteristic-zero depth of torsion characters
// ===========================================================================

/// Engine for characteristic-zero depths of order-N torsion characters
/// t_i = ζ_N^{e_i}: exact over ℚ(ζ_N) when φ(N) ≤ 4, otherwise evaluated
/// over prime fields 𝔽_ℓ with ℓ ≡ 1 (mod N), ℓ > 10⁶, taking the maximum
/// rank over at least two primes (rank mod ℓ never exceeds the
/// characteristic-zero rank) and escalating to the exact cyclotomic
/// computation on disagreement.
pub struct Char0Engine {
    order: u64,
    exact: Option<(Field, Vec<FVal>)>,
    modular: Vec<(Field, Vec<FVal>)>,
}

impl Char0Engine {
    pub fn new(jl: &JumpingLoci, order: u64) -> Result<Self> {
        let _ = jl;
        if order < 2 {
            return Err(Error::Unsupported("torsion order must be ≥ 2".into()));
        }
        if euler_phi(order) <= 4 {
            let f = Field::cyclotomic(order)?;
            let zeta = f.element_of_order(order)?;
            let zpow = (0..order).map(|k| f.pow(&zeta, k)).collect();
            Ok(Char0Engine { order, exact: Some((f, zpow)), modular: Vec::new() })
        } else {
            let mut modular = Vec::new();
            let mut floor = 1_000_000;
            for _ in 0..2 {
                let l = prime_in_progression(order, floor);
                floor = l;
                let f = FieldSpec::PrimeField { p: l }.build()?;
                let zeta = f.element_of_order(order)?;
                let zpow = (0..order).map(|k| f.pow(&zeta, k)).collect();
                modular.push((f, zpow));
            }
            Ok(Char0Engine { order, exact: None, modular })
        }
    }

    /// Depth of t = (ζ^{e_1}, …, ζ^{e_n}); e must be nonzero mod order.
    pub fn depth(&self, jl: &JumpingLoci, e: &[u64]) -> Result<usize> {
        if let Some((f, zpow)) = &self.exact {
            let t: Vec<FVal> = e.iter().map(|&k| zpow[(k % self.order) as usize].clone()).collect();
            return jl.depth_at(f, &t);
        }
        let mut depths = Vec::new();
        for (f, zpow) in &self.modular {
            let t: Vec<FVal> = e.iter().map(|&k| zpow[(k % self.order) as usize].clone()).collect();
            depths.push(jl.depth_at(f, &t)?);
        }
        let min = *depths.iter().min().unwrap();
        if depths.iter().all(|&d| d == min) {
            Ok(min)
        } else {
            // Disagreement between primes: settle exactly over ℚ(ζ_N).
            let f = Field::cyclotomic(self.order)?;
            let zeta = f.element_of_order(self.order)?;
            let t: Vec<FVal> =
                e.iter().map(|&k| f.pow(&zeta, k % self.order)).collect();
            jl.depth_at(&f, &t)
        }
    }
}

/// One-shot characteristic-zero depth of an order-N character given by
/// exponents e (t_i = ζ_N^{e_i}).
pub fn depth_char0(jl: &JumpingLoci, e: &[u64], order: u64) -> Result<usize> {
    Char0Engine::new(jl, order)?.depth(jl, e)
}

// ===========================================================================
// Resonance components
// ===========================================================================

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentKind {
    /// L_I for a flat I with |I| ≥ 3.
    Local { flat: Vec<usize> },
    /// A dim-2 essential component supported on six lines (braid-type).
    Braid,
    Other,
}

/// One linear component of R₁ over 𝔽_p (row-reduced basis).
#[derive(Debug, Clone)]
pub struct ResonanceComponent {
    pub basis: Vec<Vec<u64>>,
    pub dim: usize,
    pub kind: ComponentKind,
    /// Indices where some basis vector is nonzero.
    pub support: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ResonanceDecomposition {
    pub p: u64,
    pub components: Vec<ResonanceComponent>,
    /// R₁ points (projective representatives) not absorbed into any linear
    /// component; never silently dropped.
    pub unabsorbed: Vec<Vec<u64>>,
}

impl ResonanceDecomposition {
    /// h_r: the number of components of dimension r.
    pub fn h_tally(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for c in &self.components {
            *h.entry(c.dim).or_insert(0) += 1;
        }
        h
    }
}

/// Decompose R₁(G, 𝔽_p) into maximal linear pieces by greedy linear
/// closure: take an unassigned projective point, grow the largest subspace
/// through it whose nonzero points all lie in R₁, and classify the result
/// against the lattice.
pub fn resonance_components(
    jl: &JumpingLoci,
    lat: &IntersectionLattice,
    p: u64,
    budget: u64,
) -> Result<ResonanceDecomposition> {
    let n = jl.n;
    // Collect projective representatives of R₁ \ {0}.
    let mut points: Vec<Vec<u64>> = Vec::new();
    for_each_projective(n, p, budget, |lambda| {
        if jl.lin_rank_mod_p(lambda, p) < n - 1 {
            points.push(lambda.to_vec());
        }
    })?;
    let in_r1 = |v: &[u64]| jl.lin_rank_mod_p(v, p) < n - 1;

    let mut assigned = vec![false; points.len()];
    let mut components = Vec::new();
    let mut unabsorbed = Vec::new();
    for start in 0..points.len() {
        if assigned[start] {
            continue;
        }
        // Grow a basis through points[start].
        let mut basis: Vec<Vec<u64>> = vec![points[start].clone()];
        for cand in points.iter() {
            if in_span_mod_p(&basis, cand, p) {
                continue;
            }
            let mut trial = basis.clone();
            trial.push(cand.clone());
            if span_inside(&trial, p, &in_r1) {
                basis = trial;
            }
        }
        if basis.len() == 1 {
            // An isolated projective point is still a (dim-1) linear piece;
            // report it as a component of dimension 1.
        }
        // Mark every point inside the span as assigned.
        let mut members = 0usize;
        for (i, pt) in points.iter().enumerate() {
            if !assigned[i] && in_span_mod_p(&basis, pt, p) {
                assigned[i] = true;
                members += 1;
            }
        }
        let dim = basis.len();
        // Sanity: the subspace holds exactly (p^dim − 1)/(p − 1) projective
        // points, all of which must have been collected.
        let expect = (p.pow(dim as u32) - 1) / (p - 1);
        if members as u64 != expect {
            // Greedy closure failed to form a clean subspace; report the
            // seed point as unabsorbed rather than asserting linearity.
            unabsorbed.push(points[start].clone());
            continue;
        }
        let basis = row_reduce_mod_p(basis, p);
        let support: Vec<usize> =
            (0..n).filter(|&j| basis.iter().any(|b| b[j] != 0)).collect();
        let kind = classify(lat, &basis, &support, dim);
        components.push(ResonanceComponent { basis, dim, kind, support });
    }
    components.sort_by(|a, b| (b.dim, a.support.clone()).cmp(&(a.dim, b.support.clone())));
    Ok(ResonanceDecomposition { p, components, unabsorbed })
}

fn classify(
    lat: &IntersectionLattice,
    basis: &[Vec<u64>],
    support: &[usize],
    dim: usize,
) -> ComponentKind {
    // Local component L_I: support inside a flat I, dim = |I| − 1, and all
    // basis rows sum to zero on I (they automatically do, being in
    // R₁ ⊂ Δ_n restricted to the support).
    for fl in &lat.flats {
        if fl.len() >= 3 && dim == fl.len() - 1 && support.iter().all(|s| fl.contains(s)) {
            return ComponentKind::Local { flat: fl.clone() };
        }
    }
    if dim == 2 && support.len() == 6 {
        return ComponentKind::Braid;
    }
    ComponentKind::Other
}

fn in_span_mod_p(basis: &[Vec<u64>], v: &[u64], p: u64) -> bool {
    let mut rows: Vec<Vec<u64>> = basis.to_vec();
    let r0 = crate::exactalg::rank_mod_p(&mut rows, p);
    let mut rows: Vec<Vec<u64>> = basis.to_vec();
    rows.push(v.to_vec());
    r0 == crate::exactalg::rank_mod_p(&mut rows, p)
}

/// Does every nonzero point of span(basis) lie in the given set?
fn span_inside(basis: &[Vec<u64>], p: u64, inside: &impl Fn(&[u64]) -> bool) -> bool {
    let n = basis[0].len();
    let k = basis.len();
    let mut coeff = vec![0u64; k];
    let total = p.pow(k as u32);
    for _ in 1..total {
        incr(&mut coeff, p);
        let mut v = vec![0u64; n];
        for (c, b) in coeff.iter().zip(basis) {
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi = (*vi + c * bi) % p;
            }
        }
        if !inside(&v) {
            return false;
        }
    }
    true
}

fn row_reduce_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let n = rows[0].len();
    let mut pivot_row = 0;
    for col in 0..n {
        let Some(r) = (pivot_row..rows.len()).find(|&r| rows[r][col] % p != 0) else {
            continue;
        };
        rows.swap(pivot_row, r);
        let inv = crate::exactalg::inv_mod(rows[pivot_row][col] % p, p);
        for v in rows[pivot_row].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..rows.len() {
            if r != pivot_row && rows[r][col] % p != 0 {
                let c = rows[r][col] % p;
                for j in 0..n {
                    let s = rows[pivot_row][j] * c % p;
                    rows[r][j] = (rows[r][j] + p - s) % p;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.truncate(pivot_row);
    rows
}

// ===========================================================================
// Neighborly partitions (combinatorial certification of components)
// ===========================================================================

/// A rational component candidate L_P from a neighborly partition of a
/// sub-arrangement: a row-reduced basis over ℚ.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborlyComponent {
    pub support: Vec<usize>,
    pub partition: Vec<Vec<usize>>,
    pub basis: Vec<Vec<BigRational>>,
    pub dim: usize,
}

/// Enumerate neighborly partitions of all sub-arrangements up to
/// `size_bound` lines, compute each L_P (inside Δ of the support, with
/// zero coordinates off it), and return the distinct subspaces of dim ≥ 1
/// that are maximal under inclusion.
pub fn neighborly_components(
    lat: &IntersectionLattice,
    size_bound: usize,
) -> Result<Vec<NeighborlyComponent>> {
    let n = lat.n;
    if n > 20 {
        return Err(Error::Budget("neighborly search limited to ≤ 20 lines".into()));
    }
    let mut found: Vec<NeighborlyComponent> = Vec::new();
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if support.len() < 3 || support.len() > size_bound {
            continue;
        }
        // Rank-2 flats of the sub-arrangement: traces of the full flats.
        let mut subflats: Vec<Vec<usize>> = lat
            .flats
            .iter()
            .map(|fl| fl.iter().copied().filter(|i| support.contains(i)).collect::<Vec<_>>())
            .filter(|tr| tr.len() >= 2)
            .collect();
        subflats.sort();
        subflats.dedup();
        for partition in partitions(&support) {
            if !is_neighborly(&partition, &subflats) {
                continue;
            }
            if let Some(comp) = component_of_partition(n, &support, &partition, &subflats) {
                if span_in_r1_q(&comp.basis, lat) {
                    found.push(comp);
                }
            }
        }
    }
    // Deduplicate by basis, then drop subspaces contained in a larger one.
    found.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| a.basis.partial_cmp_key().cmp(&b.basis.partial_cmp_key())));
    dedup_maximal(found)
}

trait BasisKey {
    fn partial_cmp_key(&self) -> String;
}
impl BasisKey for Vec<Vec<BigRational>> {
    fn partial_cmp_key(&self) -> String {
        format!("{self:?}")
    }
}

fn dedup_maximal(found: Vec<NeighborlyComponent>) -> Result<Vec<NeighborlyComponent>> {
    let mut kept: Vec<NeighborlyComponent> = Vec::new();
    for cand in found {
        if kept.iter().any(|k| subspace_contains(&k.basis, &cand.basis)) {
            continue;
        }
        kept.push(cand);
    }
    Ok(kept)
}

/// Does a generic point of span(basis) drop the rank of the lattice
/// linearized matrix below n − 1 (i.e., lie in R₁)? A neighborly partition
/// only certifies a component when its subspace actually resonates; rank at
/// random points bounds the generic rank from below, so we demand the drop
/// at several independent samples.
fn span_in_r1_q(basis: &[Vec<BigRational>], lat: &IntersectionLattice) -> bool {
    let lin = crate::foxcalc::linearize_from_lattice(lat);
    let f = Field::Rationals;
    let samples: [&[i64]; 3] = [&[1, 2, 3, 5, 7, 11, 13, 17, 19], &[1, -3, 9, -27, 81, -243, 729, -2187, 6561], &[5, 1, 4, 9, 2, 8, 3, 7, 6]];
    for coeffs in samples {
        let mut lambda = vec![BigRational::zero(); lat.n];
        for (b, &c) in basis.iter().zip(coeffs) {
            for (li, bi) in lambda.iter_mut().zip(b) {
                *li += bi * BigRational::from(BigInt::from(c));
            }
        }
        let lv: Vec<FVal> = lambda.into_iter().map(FVal::Rat).collect();
        let mat = crate::foxcalc::evaluate_linearized(&lin, &f, &lv);
        if rank_generic(&f, &mat) >= lat.n - 1 {
            return false;
        }
    }
    true
}

/// Is span(inner) ⊆ span(outer) over ℚ?
fn subspace_contains(outer: &[Vec<BigRational>], inner: &[Vec<BigRational>]) -> bool {
    inner.iter().all(|v| {
        let mut rows: Vec<Vec<BigRational>> = outer.to_vec();
        let r0 = rank_q(&mut rows);
        let mut rows: Vec<Vec<BigRational>> = outer.to_vec();
        rows.push(v.clone());
        rank_q(&mut rows) == r0
    })
}

fn rank_q(rows: &mut [Vec<BigRational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let n = rows[0].len();
    let mut rank = 0;
    for col in 0..n {
        let Some(r) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, r);
        let pv = rows[rank][col].clone();
        for r2 in rank + 1..rows.len() {
            if !rows[r2][col].is_zero() {
                let factor = &rows[r2][col] / &pv;
                for j in col..n {
                    let s = &rows[rank][j] * &factor;
                    rows[r2][j] = &rows[r2][j] - &s;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// All set partitions of `items` (restricted growth strings).
fn partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let m = items.len();
    let mut out = Vec::new();
    let mut codes = vec![0usize; m];
    loop {
        let nblocks = codes.iter().copied().max().unwrap_or(0) + 1;
        let mut blocks = vec![Vec::new(); nblocks];
        for (i, &c) in codes.iter().enumerate() {
            blocks[c].push(items[i]);
        }
        out.push(blocks);
        // next restricted growth string
        let mut i = m;
        loop {
            if i == 1 {
                return out;
            }
            i -= 1;
            let maxprev = codes[..i].iter().copied().max().unwrap_or(0);
            if codes[i] <= maxprev {
                codes[i] += 1;
                for c in codes[i + 1..].iter_mut() {
                    *c = 0;
                }
                break;
            }
            codes[i] = 0;
        }
    }
}

/// Neighborly: for every sub-flat I, if some block p_j has |p_j ∩ I| ≥
/// |I| − 1, then I ⊆ p_j.
fn is_neighborly(partition: &[Vec<usize>], subflats: &[Vec<usize>]) -> bool {
    for fl in subflats {
        for block in partition {
            let meet = fl.iter().filter(|i| block.contains(i)).count();
            if meet + 1 >= fl.len() && meet < fl.len() {
                return false;
            }
        }
    }
    true
}

/// L_P = Δ_support ∩ ⋂_{I ⊄ any block} {Σ_{i∈I} λ_i = 0}, with λ = 0 off
/// the support; returns None when dim = 0.
fn component_of_partition(
    n: usize,
    support: &[usize],
    partition: &[Vec<usize>],
    subflats: &[Vec<usize>],
) -> Option<NeighborlyComponent> {
    // Build the constraint matrix over ℚ.
    let mut constraints: Vec<Vec<BigRational>> = Vec::new();
    let zero_row = vec![BigRational::zero(); n];
    // coordinates off the support vanish
    for j in 0..n {
        if !support.contains(&j) {
            let mut row = zero_row.clone();
            row[j] = BigRational::one();
            constraints.push(row);
        }
    }
    // Δ on the support
    let mut delta = zero_row.clone();
    for &j in support {
        delta[j] = BigRational::one();
    }
    constraints.push(delta);
    for fl in subflats {
        let crosses = !partition.iter().any(|b| fl.iter().all(|i| b.contains(i)));
        if crosses {
            let mut row = zero_row.clone();
            for &j in fl {
                row[j] = BigRational::one();
            }
            constraints.push(row);
        }
    }
    let basis = kernel_basis_q(&constraints, n);
    if basis.is_empty() {
        return None;
    }
    let dim = basis.len();
    Some(NeighborlyComponent {
        support: support.to_vec(),
        partition: partition.to_vec(),
        basis,
        dim,
    })
}

/// Row-reduced basis of the kernel of a rational constraint matrix.
fn kernel_basis_q(constraints: &[Vec<BigRational>], n: usize) -> Vec<Vec<BigRational>> {
    // Gauss-reduce the constraints, then read off free-variable basis.
    let mut rows: Vec<Vec<BigRational>> = constraints.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(r) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, r);
        let pv = rows[rank][col].clone();
        for v in rows[rank].iter_mut() {
            *v = &*v / &pv;
        }
        for r2 in 0..rows.len() {
            if r2 != rank && !rows[r2][col].is_zero() {
                let factor = rows[r2][col].clone();
                for j in 0..n {
                    let s = &rows[rank][j] * &factor;
                    rows[r2][j] = &rows[r2][j] - &s;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); n];
        v[free] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -rows[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Reduce a rational basis mod p (clears denominators rowwise); errors if a
/// denominator vanishes mod p.
pub fn basis_mod_p(basis: &[Vec<BigRational>], p: u64) -> Result<Vec<Vec<u64>>> {
    let pb = BigInt::from(p);
    basis
        .iter()
        .map(|row| {
            // common denominator
            let mut den = BigInt::one();
            for v in row {
                den = num::integer::lcm(den, v.denom().abs());
            }
            if (&den % &pb).is_zero() {
                return Err(Error::FieldSpec(format!("denominator divisible by {p}")));
            }
            Ok(row
                .iter()
                .map(|v| {
                    let num = v.numer() * &den / v.denom();
                    let r = ((num % &pb) + &pb) % &pb;
                    u64::try_from(&r).unwrap()
                })
                .collect())
        })
        .collect()
}

// ===========================================================================
// Tests
// ===========================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braidgroup::tests::toy_arrangement;

    fn toy_loci() -> JumpingLoci {
        JumpingLoci::from_arrangement(&toy_arrangement(), None).unwrap()
    }

    #[test]
    fn toy_depths_match_published_v1() {
        // V₁(G) = {t₁t₂t₄ = 1, t₃ = 1}.
        let jl = toy_loci();
        let f = FieldSpec::PrimeField { p: 5 }.build().unwrap();
        let mk = |v: [i64; 4]| v.iter().map(|&x| f.from_i64(x)).collect::<Vec<_>>();
        // (−1,−1,1,1): t₁t₂t₄ = 1, t₃ = 1 → depth 1
        assert_eq!(jl.depth_at(&f, &mk([-1, -1, 1, 1])).unwrap(), 1);
        // (2,1,1,1): t₁t₂t₄ = 2 ≠ 1 → depth 0
        assert_eq!(jl.depth_at(&f, &mk([2, 1, 1, 1])).unwrap(), 0);
        // (2,3,1,4): product 24 = 4 ≠ 1 → 0; (2,3,1,1): 6 = 1 mod 5, t₃=1 → 1
        assert_eq!(jl.depth_at(&f, &mk([2, 3, 1, 4])).unwrap(), 0);
        assert_eq!(jl.depth_at(&f, &mk([2, 3, 1, 1])).unwrap(), 1);
        // trivial character rejected
        assert!(jl.depth_at(&f, &mk([1, 1, 1, 1])).is_err());
    }

    #[test]
    fn free_group_depth_is_maximal() {
        // F₃: no relators, every nontrivial character has depth n−1 = 2.
        let pres = GroupPresentation { ngens: 3, relators: vec![] };
        let jl = JumpingLoci::from_presentation(&pres);
        let f = FieldSpec::PrimeField { p: 7 }.build().unwrap();
        let t = vec![f.from_i64(2), f.from_i64(1), f.from_i64(3)];
        assert_eq!(jl.depth_at(&f, &t).unwrap(), 2);
    }

    #[test]
    fn toy_beta_and_nu() {
        // V₁ = C₁₂₄ is a 2-torus; its p-torsion t ≠ 1 has depth exactly 1
        // (V₂ = {1}), so β_{p,1} = (p² − 1)/(p − 1) = p + 1 and the rest of
        // the (p⁴−1)/(p−1) classes have depth 0. Same for ν by R₁ = L₁₂₄.
        let jl = toy_loci();
        for p in [2u64, 3, 5] {
            for q in [0u64, 2, 3, 7] {
                if q == p {
                    continue;
                }
                let beta = beta_invariants(&jl, p, q, DEFAULT_BUDGET).unwrap();
                assert_eq!(beta.get(&1).copied().unwrap_or(0), p + 1, "β_({p},1)^({q})");
                assert_eq!(beta.get(&2).copied().unwrap_or(0), 0);
                let total: u64 = beta.values().sum();
                assert_eq!(total, (p.pow(4) - 1) / (p - 1), "partition of all subgroups");
            }
            let nu = nu_invariants(&jl, p, DEFAULT_BUDGET).unwrap();
            assert_eq!(nu.get(&1).copied().unwrap_or(0), p + 1, "ν_({p},1)");
            let total: u64 = nu.values().sum();
            assert_eq!(total, (p.pow(4) - 1) / (p - 1));
        }
    }

    #[test]
    fn char0_engine_agrees_with_finite_fields() {
        let jl = toy_loci();
        // order 6: φ(6) = 2 → exact cyclotomic route
        let eng = Char0Engine::new(&jl, 6).unwrap();
        assert!(eng.exact.is_some());
        // t = (ζ, ζ⁻¹, 1, 1): t₁t₂t₄ = 1, t₃ = 1 → depth 1
        assert_eq!(eng.depth(&jl, &[1, 5, 0, 0]).unwrap(), 1);
        assert_eq!(eng.depth(&jl, &[1, 1, 0, 0]).unwrap(), 0);
        // order 32: φ = 16 → modular route with ℓ ≡ 1 mod 32, ℓ > 10⁶
        let eng = Char0Engine::new(&jl, 32).unwrap();
        assert!(eng.exact.is_none());
        assert_eq!(eng.depth(&jl, &[1, 31, 0, 0]).unwrap(), 1);
        assert_eq!(eng.depth(&jl, &[1, 2, 3, 4]).unwrap(), 0);
    }

    #[test]
    fn toy_resonance_components() {
        // R₁ = L₁₂₄ only: one local component of dim 2.
        let jl = toy_loci();
        let lat = crate::arrangement::compute_lattice(&toy_arrangement()).unwrap();
        for p in [2u64, 3, 5, 13] {
            let dec = resonance_components(&jl, &lat, p, DEFAULT_BUDGET).unwrap();
            assert!(dec.unabsorbed.is_empty());
            assert_eq!(dec.components.len(), 1, "p = {p}");
            let c = &dec.components[0];
            assert_eq!(c.dim, 2);
            assert_eq!(c.kind, ComponentKind::Local { flat: vec![0, 1, 3] });
        }
    }

    #[test]
    fn toy_neighborly_components() {
        let lat = crate::arrangement::compute_lattice(&toy_arrangement()).unwrap();
        let comps = neighborly_components(&lat, 9).unwrap();
        // Only the local component of the triple point survives with dim ≥ 1
        // after maximality filtering... the triple {1,2,4} gives dim 2.
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].dim, 2);
        assert_eq!(comps[0].support, vec![0, 1, 3]);
        // And it reduces mod 5 to the enumerated component.
        let jl = toy_loci();
        let dec = resonance_components(&jl, &lat, 5, DEFAULT_BUDGET).unwrap();
        let modp = basis_mod_p(&comps[0].basis, 5).unwrap();
        let reduced = row_reduce_mod_p(modp, 5);
        assert_eq!(reduced, dec.components[0].basis);
    }

    /// Braid arrangement Q = xyz(x−y)(x−z)(y−z): R₁ has four local
    /// components (triple points 124, 135, 236, 456) and one essential
    /// dim-2 component from the neighborly partition (16|25|34);
    /// ν_{p,1} = 5(p+1).
    #[test]
    fn braid_arrangement_resonance() {
        let arr = Arrangement::from_int_forms(
            "braid",
            3,
            &[
                [1, 0, 0],
                [0, 1, 0],
                [0, 0, 1],
                [1, -1, 0],
                [1, 0, -1],
                [0, 1, -1],
            ],
        )
        .unwrap();
        let lat = crate::arrangement::compute_lattice(&arr).unwrap();
        let jl = JumpingLoci::from_arrangement(&arr, None).unwrap();
        for p in [2u64, 3, 5] {
            let nu = nu_invariants(&jl, p, DEFAULT_BUDGET).unwrap();
            assert_eq!(nu.get(&1).copied().unwrap_or(0), 5 * (p + 1), "ν_({p},1)");
            assert_eq!(nu.get(&2), None, "ν_({p},2)");
            let beta = beta_invariants(&jl, p, if p == 2 { 7 } else { 2 }, DEFAULT_BUDGET).unwrap();
            assert_eq!(beta.get(&1).copied().unwrap_or(0), 5 * (p + 1), "β_({p},1)");
        }
        let dec = resonance_components(&jl, &lat, 5, DEFAULT_BUDGET).unwrap();
        assert!(dec.unabsorbed.is_empty());
        assert_eq!(dec.components.len(), 5);
        assert!(dec.components.iter().all(|c| c.dim == 2));
        let locals = dec
            .components
            .iter()
            .filter(|c| matches!(c.kind, ComponentKind::Local { .. }))
            .count();
        assert_eq!(locals, 4);
        assert!(dec.components.iter().any(|c| c.kind == ComponentKind::Braid));
        // The combinatorial route certifies the same five components.
        let comps = neighborly_components(&lat, 9).unwrap();
        assert_eq!(comps.len(), 5);
        assert!(comps.iter().all(|c| c.dim == 2));
        let essential = comps.iter().find(|c| c.support.len() == 6).unwrap();
        // partition (16|25|34) in 0-based labels {0,5},{1,4},{2,3}
        let mut blocks = essential.partition.clone();
        for b in blocks.iter_mut() {
            b.sort();
        }
        blocks.sort();
        assert_eq!(blocks, vec![vec![0, 5], vec![1, 4], vec![2, 3]]);
    }

    #[test]
    fn partitions_count_is_bell() {
        assert_eq!(partitions(&[0]).len(), 1);
        assert_eq!(partitions(&[0, 1, 2]).len(), 5);
        assert_eq!(partitions(&[0, 1, 2, 3, 4]).len(), 52);
    }
}
