//! Arrangement data model: defining linear forms over ℚ or a number field
//! (or an abstract rank-2 flat list), the intersection lattice with
//! multiplicities and Betti data, sub-arrangement restriction, cone/decone,
//! generic real 2-slices for braid monodromy, and counting of braid
//! sub-arrangements.
//!
//! Line indices are 0-based internally; the JSON file format and all printed
//! output use 1-based indices matching the usual figure labels (flat {1,2,4},
//! component C₁₂₄, …).

use crate::exactalg::{Field, FieldSpec, FVal};
use crate::{Error, Result};
use itertools::Itertools;
use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::str::FromStr;

// ===========================================================================
// Data model
// ===========================================================================

/// A line arrangement: geometric (forms) and/or abstract (flat list), with an
/// optional externally supplied braid monodromy for non-real arrangements.
#[derive(Debug, Clone)]
pub struct Arrangement {
    pub name: String,
    /// 2 = affine lines in ℂ², 3 = central planes in ℂ³.
    pub ambient_dim: usize,
    pub coeff_field: FieldSpec,
    /// Coefficient vectors of length 3: central `a·x + b·y + c·z`, affine
    /// `a·x + b·y + c`. May be empty for abstract arrangements.
    pub forms: Vec<Vec<FVal>>,
    /// Number of lines (= forms.len() when forms are present).
    pub n: usize,
    /// Abstract flats of size ≥ 3 (0-based line indices); doubles implied.
    pub lattice_override: Option<Vec<Vec<usize>>>,
    /// Externally supplied braid monodromy generators α_q = A_{I_q}^{δ_q}.
    pub monodromy_override: Option<Vec<MonodromyGen>>,
    /// Optional exponents annotation (for fiber-type arrangements).
    pub exponents: Option<Vec<i64>>,
}

/// One braid-monodromy generator: the full twist on flat `i_q` conjugated by
/// the pure-braid word `delta` (kept as text in the `A(i,j)` grammar).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonodromyGen {
    /// 0-based lines through the singular fiber point.
    pub flat: Vec<usize>,
    /// Conjugating word in the braid-word grammar, 1-based labels.
    pub delta: String,
}

/// The rank-2 intersection lattice: every flat (including double points).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionLattice {
    pub n: usize,
    /// All rank-2 flats, each sorted ascending; flats sorted lexicographically.
    pub flats: Vec<Vec<usize>>,
}

/// Multiplicity and Betti data derived from a lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Multiplicities {
    /// m_r = number of flats with exactly r lines, r ≥ 2.
    pub m: BTreeMap<usize, usize>,
    /// s = Σ m_r, the number of rank-2 flats.
    pub s: usize,
    /// b₂ = Σ m_r (r − 1).
    pub b2: usize,
    /// b₃ = b₂ − n + 1 for central 3-arrangements; None for affine.
    pub b3: Option<usize>,
}

// ===========================================================================
// Construction & validation
// ===========================================================================

impl Arrangement {
    /// Build from geometric forms, validating the invariants.
    pub fn from_forms(
        name: &str,
        ambient_dim: usize,
        coeff_field: FieldSpec,
        forms: Vec<Vec<FVal>>,
    ) -> Result<Self> {
        let arr = Arrangement {
            name: name.to_string(),
            ambient_dim,
            coeff_field,
            n: forms.len(),
            forms,
            lattice_override: None,
            monodromy_override: None,
            exponents: None,
        };
        arr.validate()?;
        Ok(arr)
    }

    /// Build from rational integer coefficient triples (convenience).
    pub fn from_int_forms(name: &str, ambient_dim: usize, forms: &[[i64; 3]]) -> Result<Self> {
        let f: Vec<Vec<FVal>> = forms
            .iter()
            .map(|row| row.iter().map(|&v| FVal::Rat(BigRational::from(BigInt::from(v)))).collect())
            .collect();
        Self::from_forms(name, ambient_dim, FieldSpec::Rationals, f)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ambient_dim != 2 && self.ambient_dim != 3 {
            return Err(Error::Arrangement("ambient dimension must be 2 or 3".into()));
        }
        if self.forms.is_empty() && self.lattice_override.is_none() {
            return Err(Error::Arrangement(
                "arrangement needs defining forms or an explicit flat list".into(),
            ));
        }
        if !self.forms.is_empty() && self.forms.len() != self.n {
            return Err(Error::Arrangement("n does not match number of forms".into()));
        }
        let field = self.coeff_field.build()?;
        for (i, f) in self.forms.iter().enumerate() {
            if f.len() != 3 {
                return Err(Error::Arrangement(format!(
                    "form {} must have 3 coefficients",
                    i + 1
                )));
            }
            let linear_part_zero = if self.ambient_dim == 2 {
                field.is_zero(&f[0]) && field.is_zero(&f[1])
            } else {
                f.iter().all(|c| field.is_zero(c))
            };
            if linear_part_zero {
                return Err(Error::Arrangement(format!("form {} is degenerate", i + 1)));
            }
        }
        // Forms distinct up to scalar.
        for (i, j) in (0..self.forms.len()).tuple_combinations() {
            if proportional(&field, &self.forms[i], &self.forms[j]) {
                return Err(Error::Arrangement(format!(
                    "forms {} and {} are proportional",
                    i + 1,
                    j + 1
                )));
            }
        }
        if let Some(flats) = &self.lattice_override {
            validate_flat_list(self.n, flats)?;
        }
        if let Some(words) = &self.monodromy_override {
            for w in words {
                if w.flat.len() < 2 || w.flat.iter().any(|&i| i >= self.n) {
                    return Err(Error::Arrangement("monodromy flat indices out of range".into()));
                }
            }
        }
        Ok(())
    }

    /// A deterministic 64-bit hash of the arrangement content, used to seed
    /// genericity randomization reproducibly.
    pub fn content_hash(&self) -> u64 {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update(self.name.as_bytes());
        h.update([self.ambient_dim as u8]);
        h.update(format!("{:?}", self.coeff_field).as_bytes());
        h.update(format!("{:?}", self.forms).as_bytes());
        h.update(format!("{:?}", self.lattice_override).as_bytes());
        let d = h.finalize();
        u64::from_le_bytes(d[..8].try_into().unwrap())
    }
}

fn proportional(f: &Field, a: &[FVal], b: &[FVal]) -> bool {
    // a = λ·b for some λ ≠ 0.
    let mut ratio: Option<FVal> = None;
    for (x, y) in a.iter().zip(b) {
        match (f.is_zero(x), f.is_zero(y)) {
            (true, true) => continue,
            (true, false) | (false, true) => return false,
            (false, false) => {
                let r = f.div(x, y);
                match &ratio {
                    None => ratio = Some(r),
                    Some(r0) => {
                        if *r0 != r {
                            return false;
                        }
                    }
                }
            }
        }
    }
    ratio.is_some()
}

fn validate_flat_list(n: usize, flats: &[Vec<usize>]) -> Result<()> {
    let mut seen_pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for flat in flats {
        if flat.len() < 3 {
            return Err(Error::Arrangement(
                "explicit flats must have size >= 3 (doubles are implied)".into(),
            ));
        }
        let set: BTreeSet<usize> = flat.iter().copied().collect();
        if set.len() != flat.len() || flat.iter().any(|&i| i >= n) {
            return Err(Error::Arrangement("flat has repeated or out-of-range indices".into()));
        }
        for (&i, &j) in set.iter().tuple_combinations() {
            if !seen_pairs.insert((i, j)) {
                return Err(Error::Arrangement(format!(
                    "pair {{{},{}}} lies in more than one flat",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

// ===========================================================================
// Lattice computation
// ===========================================================================

/// Compute the rank-2 intersection lattice. When both geometric forms and an
/// explicit flat list are present, the two are cross-validated and any
/// mismatch is an error.
pub fn compute_lattice(arr: &Arrangement) -> Result<IntersectionLattice> {
    let geometric = if arr.forms.is_empty() { None } else { Some(geometric_lattice(arr)?) };
    let declared = match &arr.lattice_override {
        Some(flats) => Some(lattice_from_flat_list(arr.n, flats)),
        None => None,
    };
    match (geometric, declared) {
        (Some(g), Some(d)) => {
            if g != d {
                return Err(Error::Arrangement(format!(
                    "declared flats disagree with geometric lattice for '{}'",
                    arr.name
                )));
            }
            Ok(g)
        }
        (Some(g), None) => Ok(g),
        (None, Some(d)) => Ok(d),
        (None, None) => Err(Error::Arrangement("no lattice data available".into())),
    }
}

/// Expand a size-≥3 flat list into the full lattice with implied doubles.
fn lattice_from_flat_list(n: usize, flats: &[Vec<usize>]) -> IntersectionLattice {
    let mut covered: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for flat in flats {
        let mut f = flat.clone();
        f.sort_unstable();
        for (&i, &j) in f.iter().tuple_combinations() {
            covered.insert((i, j));
        }
        out.push(f);
    }
    for i in 0..n {
        for j in i + 1..n {
            if !covered.contains(&(i, j)) {
                out.push(vec![i, j]);
            }
        }
    }
    out.sort();
    IntersectionLattice { n, flats: out }
}

fn geometric_lattice(arr: &Arrangement) -> Result<IntersectionLattice> {
    let field = arr.coeff_field.build()?;
    let mut groups: HashMap<Vec<FVal>, BTreeSet<usize>> = HashMap::new();
    for (i, j) in (0..arr.n).tuple_combinations() {
        let key = match intersection_key(&field, arr.ambient_dim, &arr.forms[i], &arr.forms[j]) {
            Some(k) => k,
            None => continue, // parallel affine lines: no flat
        };
        let entry = groups.entry(key).or_default();
        entry.insert(i);
        entry.insert(j);
    }
    let mut flats: Vec<Vec<usize>> =
        groups.into_values().map(|s| s.into_iter().collect()).collect();
    flats.sort();
    Ok(IntersectionLattice { n: arr.n, flats })
}

/// Canonical key identifying the common point of two lines: for central
/// arrangements the normalized direction of the intersection line (cross
/// product of the forms), for affine the normalized solution point. None when
/// affine lines are parallel.
fn intersection_key(f: &Field, ambient: usize, a: &[FVal], b: &[FVal]) -> Option<Vec<FVal>> {
    if ambient == 3 {
        let cross = vec![
            f.sub(&f.mul(&a[1], &b[2]), &f.mul(&a[2], &b[1])),
            f.sub(&f.mul(&a[2], &b[0]), &f.mul(&a[0], &b[2])),
            f.sub(&f.mul(&a[0], &b[1]), &f.mul(&a[1], &b[0])),
        ];
        // Normalize first nonzero coordinate to 1.
        let piv = cross.iter().position(|c| !f.is_zero(c))?;
        let inv = f.inv(&cross[piv]);
        Some(cross.iter().map(|c| f.mul(c, &inv)).collect())
    } else {
        // Solve a₀x + a₁y + a₂ = 0, b₀x + b₁y + b₂ = 0.
        let det = f.sub(&f.mul(&a[0], &b[1]), &f.mul(&a[1], &b[0]));
        if f.is_zero(&det) {
            return None;
        }
        let dinv = f.inv(&det);
        // Cramer: x = (a₁b₂ − a₂b₁)/det, y = (a₂b₀ − a₀b₂)/det.
        let x = f.mul(&f.sub(&f.mul(&a[1], &b[2]), &f.mul(&a[2], &b[1])), &dinv);
        let y = f.mul(&f.sub(&f.mul(&a[2], &b[0]), &f.mul(&a[0], &b[2])), &dinv);
        Some(vec![x, y])
    }
}

impl IntersectionLattice {
    /// Flats of size ≥ 3 (the ones listed explicitly in tables).
    pub fn listed_flats(&self) -> Vec<&Vec<usize>> {
        self.flats.iter().filter(|f| f.len() >= 3).collect()
    }

    /// The unique flat containing a given pair of lines, if any.
    pub fn flat_of_pair(&self, i: usize, j: usize) -> Option<&Vec<usize>> {
        self.flats.iter().find(|f| f.contains(&i) && f.contains(&j))
    }
}

/// Multiplicity/Betti data; `central` selects whether b₃ applies.
pub fn multiplicities(lat: &IntersectionLattice, central: bool) -> Multiplicities {
    let mut m: BTreeMap<usize, usize> = BTreeMap::new();
    for f in &lat.flats {
        *m.entry(f.len()).or_insert(0) += 1;
    }
    let s = lat.flats.len();
    let b2: usize = lat.flats.iter().map(|f| f.len() - 1).sum();
    let b3 = if central { Some(b2 + 1 - lat.n) } else { None };
    Multiplicities { m, s, b2, b3 }
}

/// Poincaré polynomial coefficients of the complement, low → high:
/// [1, n, b₂] (affine) or [1, n, b₂, b₃] (central).
pub fn poincare_polynomial(lat: &IntersectionLattice, central: bool) -> Vec<i64> {
    let mult = multiplicities(lat, central);
    let mut p = vec![1, lat.n as i64, mult.b2 as i64];
    if let Some(b3) = mult.b3 {
        p.push(b3 as i64);
    }
    p
}

// ===========================================================================
// Restriction, cone, decone
// ===========================================================================

/// Sub-arrangement on the lines in `s` (0-based, ascending order imposed);
/// forms, flats and monodromy data are restricted and reindexed.
pub fn restrict(arr: &Arrangement, s: &[usize]) -> Result<Arrangement> {
    if s.is_empty() {
        return Err(Error::Arrangement("restriction to an empty set".into()));
    }
    let mut sel: Vec<usize> = s.to_vec();
    sel.sort_unstable();
    sel.dedup();
    if sel.iter().any(|&i| i >= arr.n) {
        return Err(Error::Arrangement("restriction index out of range".into()));
    }
    let reindex: HashMap<usize, usize> = sel.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let forms = if arr.forms.is_empty() {
        vec![]
    } else {
        sel.iter().map(|&i| arr.forms[i].clone()).collect()
    };
    let lattice_override = arr.lattice_override.as_ref().map(|flats| {
        flats
            .iter()
            .filter_map(|f| {
                let induced: Vec<usize> =
                    f.iter().filter_map(|i| reindex.get(i).copied()).sorted().collect();
                (induced.len() >= 3).then_some(induced)
            })
            .collect()
    });
    let out = Arrangement {
        name: format!("{}|{{{}}}", arr.name, sel.iter().map(|i| i + 1).join(",")),
        ambient_dim: arr.ambient_dim,
        coeff_field: arr.coeff_field.clone(),
        n: sel.len(),
        forms,
        lattice_override,
        monodromy_override: None,
        exponents: None,
    };
    out.validate()?;
    Ok(out)
}

/// Cone: homogenize an affine arrangement and append the hyperplane z = 0 as
/// the last line.
pub fn cone(arr: &Arrangement) -> Result<Arrangement> {
    if arr.ambient_dim != 2 {
        return Err(Error::Arrangement("cone applies to affine arrangements".into()));
    }
    if arr.forms.is_empty() {
        return Err(Error::Arrangement("cone requires defining forms".into()));
    }
    let field = arr.coeff_field.build()?;
    let mut forms = arr.forms.clone();
    forms.push(vec![field.zero(), field.zero(), field.one()]);
    let out = Arrangement {
        name: format!("c({})", arr.name),
        ambient_dim: 3,
        coeff_field: arr.coeff_field.clone(),
        n: forms.len(),
        forms,
        lattice_override: None,
        monodromy_override: None,
        exponents: None,
    };
    out.validate()?;
    Ok(out)
}

/// Decone with respect to line `i` (0-based): a coordinate change sends its
/// form to z, then z = 1. Lines keep their original order with line `i`
/// removed.
pub fn decone(arr: &Arrangement, i: usize) -> Result<Arrangement> {
    if arr.ambient_dim != 3 {
        return Err(Error::Arrangement("decone applies to central arrangements".into()));
    }
    if arr.forms.is_empty() {
        return Err(Error::Arrangement("decone requires defining forms".into()));
    }
    if i >= arr.n {
        return Err(Error::Arrangement("decone index out of range".into()));
    }
    let field = arr.coeff_field.build()?;
    // Build invertible R with third row = form_i; the first two rows are a
    // pair of standard basis vectors completing it to a basis.
    let fi = &arr.forms[i];
    let basis = |k: usize| -> Vec<FVal> {
        let mut e = vec![field.zero(), field.zero(), field.zero()];
        e[k] = field.one();
        e
    };
    let r = (0..3usize)
        .tuple_combinations()
        .map(|(k1, k2)| vec![basis(k1), basis(k2), fi.clone()])
        .find(|rows| matrix_invertible(&field, rows))
        .expect("a nonzero form always extends a standard-basis pair to a basis");
    let rinv = invert_3x3(&field, &r)?;
    // New form row = c_j · R⁻¹; affine coefficients [a, b, const] with the
    // third new coordinate set to 1.
    let mut forms = Vec::new();
    for (j, cj) in arr.forms.iter().enumerate() {
        if j == i {
            continue;
        }
        let row: Vec<FVal> = (0..3)
            .map(|c| {
                let mut acc = field.zero();
                for k in 0..3 {
                    acc = field.add(&acc, &field.mul(&cj[k], &rinv[k][c]));
                }
                acc
            })
            .collect();
        forms.push(row);
    }
    let out = Arrangement {
        name: format!("d{}({})", i + 1, arr.name),
        ambient_dim: 2,
        coeff_field: arr.coeff_field.clone(),
        n: forms.len(),
        forms,
        lattice_override: None,
        monodromy_override: None,
        exponents: None,
    };
    out.validate()?;
    Ok(out)
}

fn matrix_invertible(f: &Field, rows: &[Vec<FVal>]) -> bool {
    if rows.len() != 3 {
        return false;
    }
    let mat = crate::exactalg::FMat {
        nrows: 3,
        ncols: 3,
        data: rows.iter().flatten().cloned().collect(),
    };
    crate::exactalg::rank_generic(f, &mat) == 3
}

fn invert_3x3(f: &Field, r: &[Vec<FVal>]) -> Result<Vec<Vec<FVal>>> {
    // Adjugate / determinant.
    let det = det3(f, r);
    if f.is_zero(&det) {
        return Err(Error::Arrangement("singular coordinate change".into()));
    }
    let dinv = f.inv(&det);
    let minor = |i: usize, j: usize| -> FVal {
        let ri: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        let ci: Vec<usize> = (0..3).filter(|&k| k != j).collect();
        f.sub(
            &f.mul(&r[ri[0]][ci[0]], &r[ri[1]][ci[1]]),
            &f.mul(&r[ri[0]][ci[1]], &r[ri[1]][ci[0]]),
        )
    };
    let mut inv = vec![vec![f.zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut c = minor(j, i);
            if (i + j) % 2 == 1 {
                c = f.neg(&c);
            }
            inv[i][j] = f.mul(&c, &dinv);
        }
    }
    Ok(inv)
}

fn det3(f: &Field, r: &[Vec<FVal>]) -> FVal {
    let t1 = f.mul(&r[0][0], &f.sub(&f.mul(&r[1][1], &r[2][2]), &f.mul(&r[1][2], &r[2][1])));
    let t2 = f.mul(&r[0][1], &f.sub(&f.mul(&r[1][0], &r[2][2]), &f.mul(&r[1][2], &r[2][0])));
    let t3 = f.mul(&r[0][2], &f.sub(&f.mul(&r[1][0], &r[2][1]), &f.mul(&r[1][1], &r[2][0])));
    f.add(&f.sub(&t1, &t2), &t3)
}

// ===========================================================================
// Generic real 2-slice
// ===========================================================================

/// One vertex of a sliced arrangement: its x-coordinate and the lines
/// (original 0-based labels) passing through it.
#[derive(Debug, Clone)]
pub struct SliceVertex {
    pub x: BigRational,
    pub lines: Vec<usize>,
}

/// Ordered real affine line data from a generic 2-plane slice of a real
/// central arrangement: exactly the input needed by braid monodromy.
#[derive(Debug, Clone)]
pub struct SliceData {
    /// Per original line: (slope, intercept), so the line is y = m·x + b.
    pub lines: Vec<(BigRational, BigRational)>,
    /// Original labels ordered by increasing height far to the right of every
    /// vertex: `height_order[0]` is the lowest line.
    pub height_order: Vec<usize>,
    /// Vertices sorted by strictly decreasing x-coordinate.
    pub vertices: Vec<SliceVertex>,
}

/// Slice a real rational central arrangement by a seeded pseudo-random
/// rational 2-plane and verify genericity exactly: every line visible, no
/// parallels, the vertex set realizes exactly the rank-2 flats, and all
/// vertex x-coordinates are distinct. Retries with derived seeds; the default
/// seed is the arrangement content hash.
pub fn generic_slice(arr: &Arrangement, seed: Option<u64>) -> Result<SliceData> {
    if arr.ambient_dim != 3 {
        return Err(Error::Arrangement("generic_slice applies to central arrangements".into()));
    }
    if arr.coeff_field != FieldSpec::Rationals {
        return Err(Error::Unsupported(
            "generic_slice requires real rational forms; supply monodromy words instead".into(),
        ));
    }
    let lat = compute_lattice(arr)?;
    let forms: Vec<[BigRational; 3]> = arr
        .forms
        .iter()
        .map(|f| {
            let g = |v: &FVal| match v {
                FVal::Rat(r) => r.clone(),
                _ => unreachable!(),
            };
            [g(&f[0]), g(&f[1]), g(&f[2])]
        })
        .collect();
    let base_seed = seed.unwrap_or_else(|| arr.content_hash());
    const MAX_TRIES: u64 = 256;
    for attempt in 0..MAX_TRIES {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(base_seed.wrapping_add(attempt));
        let small = |rng: &mut rand_chacha::ChaCha8Rng| -> BigRational {
            BigRational::new(BigInt::from(rng.gen_range(-40i64..=40)), BigInt::from(rng.gen_range(1i64..=17)))
        };
        // Plane: (x,y,z) = p + s·u + t·v.
        let u: [BigRational; 3] = [small(&mut rng), small(&mut rng), small(&mut rng)];
        let v: [BigRational; 3] = [small(&mut rng), small(&mut rng), small(&mut rng)];
        let p: [BigRational; 3] = [small(&mut rng), small(&mut rng), small(&mut rng)];
        if let Some(data) = try_slice(&forms, &lat, &u, &v, &p) {
            return Ok(data);
        }
    }
    Err(Error::Genericity(MAX_TRIES as usize))
}

fn try_slice(
    forms: &[[BigRational; 3]],
    lat: &IntersectionLattice,
    u: &[BigRational; 3],
    v: &[BigRational; 3],
    p: &[BigRational; 3],
) -> Option<SliceData> {
    let dot = |a: &[BigRational; 3], b: &[BigRational; 3]| -> BigRational {
        &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
    };
    // Pull back each form to c_u·s + c_v·t + c_p = 0, i.e. t = m·s + b with
    // m = −c_u/c_v, b = −c_p/c_v. Need c_v ≠ 0 (line visible, non-vertical).
    let mut lines: Vec<(BigRational, BigRational)> = Vec::with_capacity(forms.len());
    for c in forms {
        let cu = dot(c, u);
        let cv = dot(c, v);
        let cp = dot(c, p);
        if cv.is_zero() {
            return None;
        }
        lines.push((-&cu / &cv, -&cp / &cv));
    }
    // A central slice must show every flat as a vertex: no parallels allowed.
    let mut slopes: Vec<&BigRational> = lines.iter().map(|(m, _)| m).collect();
    slopes.sort();
    if slopes.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    assemble_slice(lines, lat)
}

/// Shared genericity check + ordering: group vertices, require them to
/// realize exactly the lattice flats with distinct x-coordinates, and produce
/// the ordered slice data. Parallel lines simply contribute no vertex.
fn assemble_slice(lines: Vec<(BigRational, BigRational)>, lat: &IntersectionLattice) -> Option<SliceData> {
    let mut groups: HashMap<(BigRational, BigRational), BTreeSet<usize>> = HashMap::new();
    for (i, j) in (0..lines.len()).tuple_combinations() {
        let (mi, bi) = &lines[i];
        let (mj, bj) = &lines[j];
        if mi == mj {
            continue;
        }
        let x = (bj - bi) / (mi - mj);
        let y = mi * &x + bi;
        let e = groups.entry((x, y)).or_default();
        e.insert(i);
        e.insert(j);
    }
    let mut got: Vec<Vec<usize>> =
        groups.iter().map(|(_, s)| s.iter().copied().collect()).collect();
    got.sort();
    if got != lat.flats {
        return None;
    }
    // Distinct x-coordinates.
    let mut verts: Vec<SliceVertex> = groups
        .into_iter()
        .map(|((x, _), s)| SliceVertex { x, lines: s.into_iter().collect() })
        .collect();
    let mut xs: Vec<&BigRational> = verts.iter().map(|v| &v.x).collect();
    xs.sort();
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    // Sort vertices by strictly decreasing x.
    verts.sort_by(|a, b| b.x.cmp(&a.x));
    // Height order far to the right: evaluate at x₀ = max vertex x + 1.
    let x0 = verts.first().map(|v| &v.x + BigRational::one()).unwrap_or_else(BigRational::zero);
    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_by(|&a, &b| {
        let ya = &lines[a].0 * &x0 + &lines[a].1;
        let yb = &lines[b].0 * &x0 + &lines[b].1;
        ya.cmp(&yb)
    });
    Some(SliceData { lines, height_order: order, vertices: verts })
}

/// Ordered real line data for an affine rational arrangement, for braid
/// monodromy: tries the given coordinates first (so hand-drawn pictures keep
/// their labels), then seeded rational shears until generic (all lines
/// non-vertical, vertex x-coordinates distinct). Parallel lines are allowed.
pub fn affine_slice_data(arr: &Arrangement, seed: Option<u64>) -> Result<SliceData> {
    if arr.ambient_dim != 2 {
        return Err(Error::Arrangement("affine_slice_data applies to affine arrangements".into()));
    }
    if arr.coeff_field != FieldSpec::Rationals {
        return Err(Error::Unsupported(
            "real slicing requires rational forms; supply monodromy words instead".into(),
        ));
    }
    let lat = compute_lattice(arr)?;
    let forms: Vec<[BigRational; 3]> = arr
        .forms
        .iter()
        .map(|f| {
            let g = |v: &FVal| match v {
                FVal::Rat(r) => r.clone(),
                _ => unreachable!(),
            };
            [g(&f[0]), g(&f[1]), g(&f[2])]
        })
        .collect();
    let lines_under = |m11: &BigRational,
                       m12: &BigRational,
                       m21: &BigRational,
                       m22: &BigRational|
     -> Option<Vec<(BigRational, BigRational)>> {
        // Substitute x = m11·x' + m12·y', y = m21·x' + m22·y'.
        let mut lines = Vec::with_capacity(forms.len());
        for [a, b, c] in &forms {
            let a2 = a * m11 + b * m21;
            let b2 = a * m12 + b * m22;
            if b2.is_zero() {
                return None;
            }
            lines.push((-&a2 / &b2, -c / &b2));
        }
        Some(lines)
    };
    let one = BigRational::one();
    let zero = BigRational::zero();
    if let Some(lines) = lines_under(&one, &zero, &zero, &one) {
        if let Some(data) = assemble_slice(lines, &lat) {
            return Ok(data);
        }
    }
    let base_seed = seed.unwrap_or_else(|| arr.content_hash());
    const MAX_TRIES: u64 = 256;
    for attempt in 0..MAX_TRIES {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(base_seed.wrapping_add(attempt));
        let small = |rng: &mut rand_chacha::ChaCha8Rng| -> BigRational {
            BigRational::new(BigInt::from(rng.gen_range(-6i64..=6)), BigInt::from(rng.gen_range(7i64..=23)))
        };
        let c = small(&mut rng);
        let d = small(&mut rng);
        // Invertible for small c·d ≠ 1.
        if (&c * &d) == one {
            continue;
        }
        if let Some(lines) = lines_under(&one, &c, &d, &one) {
            if let Some(data) = assemble_slice(lines, &lat) {
                return Ok(data);
            }
        }
    }
    Err(Error::Genericity(MAX_TRIES as usize))
}

// ===========================================================================
// Braid sub-arrangement counting
// ===========================================================================

/// Count 6-element subsets whose induced lattice is that of the braid
/// arrangement: exactly four triple points, no larger flat, and every line on
/// exactly two of the triples.
pub fn count_braid_subarrangements(lat: &IntersectionLattice) -> usize {
    let mut count = 0;
    for subset in (0..lat.n).combinations(6) {
        let inside: BTreeSet<usize> = subset.iter().copied().collect();
        let mut triples: Vec<BTreeSet<usize>> = Vec::new();
        let mut bad = false;
        for f in &lat.flats {
            let induced: BTreeSet<usize> =
                f.iter().filter(|i| inside.contains(i)).copied().collect();
            if induced.len() >= 4 {
                bad = true;
                break;
            }
            if induced.len() == 3 {
                triples.push(induced);
            }
        }
        if bad || triples.len() != 4 {
            continue;
        }
        let mut incidence: HashMap<usize, usize> = HashMap::new();
        for t in &triples {
            for &i in t {
                *incidence.entry(i).or_insert(0) += 1;
            }
        }
        if subset.iter().all(|i| incidence.get(i) == Some(&2)) {
            count += 1;
        }
    }
    count
}

// ===========================================================================
// JSON file format
// ===========================================================================

/// On-disk arrangement description (1-based indices, schema-versioned).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ArrangementFile {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub name: String,
    /// 2 (affine) or 3 (central).
    pub ambient_dim: usize,
    /// "rationals" or {"minpoly": [c0, …, cd]}.
    pub field: FieldFileSpec,
    #[serde(default)]
    pub forms: Vec<Vec<CoeffRepr>>,
    /// Explicit flats (size ≥ 3), 1-based.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flats: Option<Vec<Vec<usize>>>,
    /// Braid monodromy words, 1-based flats.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monodromy: Option<Vec<MonodromyFileGen>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<i64>>,
    /// Explicit line count for abstract arrangements without forms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

fn default_schema() -> u32 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum FieldFileSpec {
    Name(String),
    MinPoly { minpoly: Vec<CoeffRepr> },
}

/// A coefficient: integer, exact fraction "p/q", or a number-field element as
/// a coefficient list in the generator.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum CoeffRepr {
    Int(i64),
    Frac(String),
    Poly(Vec<CoeffRepr>),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MonodromyFileGen {
    /// 1-based flat.
    pub i: Vec<usize>,
    pub delta: String,
}

impl CoeffRepr {
    fn to_rational(&self) -> Result<BigRational> {
        match self {
            CoeffRepr::Int(v) => Ok(BigRational::from(BigInt::from(*v))),
            CoeffRepr::Frac(s) => parse_fraction(s),
            CoeffRepr::Poly(_) => {
                Err(Error::Parse("expected a rational, found a polynomial".into()))
            }
        }
    }

    fn to_fval(&self, field: &FieldSpec) -> Result<FVal> {
        match field {
            FieldSpec::Rationals => Ok(FVal::Rat(self.to_rational()?)),
            FieldSpec::NumberField { min_poly } => {
                let deg = min_poly.len() - 1;
                let coeffs: Vec<BigRational> = match self {
                    CoeffRepr::Poly(list) => {
                        if list.len() > deg {
                            return Err(Error::Parse(
                                "number-field element has too many coefficients".into(),
                            ));
                        }
                        list.iter().map(|c| c.to_rational()).collect::<Result<_>>()?
                    }
                    other => vec![other.to_rational()?],
                };
                let mut v = vec![BigRational::zero(); deg];
                v[..coeffs.len()].clone_from_slice(&coeffs);
                Ok(FVal::Num(v))
            }
            _ => Err(Error::Parse("arrangement coefficients must be ℚ or number-field".into())),
        }
    }

    fn from_fval(v: &FVal) -> CoeffRepr {
        match v {
            FVal::Rat(r) => rational_repr(r),
            FVal::Num(coeffs) => CoeffRepr::Poly(coeffs.iter().map(rational_repr).collect()),
            FVal::Fp(x) => CoeffRepr::Int(*x as i64),
            FVal::Fq(x) => CoeffRepr::Int(*x as i64),
        }
    }
}

fn rational_repr(r: &BigRational) -> CoeffRepr {
    if r.denom().is_one() {
        if let Ok(v) = i64::try_from(r.numer().clone()) {
            return CoeffRepr::Int(v);
        }
    }
    CoeffRepr::Frac(r.to_string())
}

fn parse_fraction(s: &str) -> Result<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let num =
                BigInt::from_str(a.trim()).map_err(|_| Error::Parse(format!("bad numerator in '{s}'")))?;
            let den =
                BigInt::from_str(b.trim()).map_err(|_| Error::Parse(format!("bad denominator in '{s}'")))?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in '{s}'")));
            }
            Ok(BigRational::new(num, den))
        }
        None => {
            let v = BigInt::from_str(s).map_err(|_| Error::Parse(format!("bad integer '{s}'")))?;
            Ok(BigRational::from(v))
        }
    }
}

impl ArrangementFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("arrangement file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("arrangement serialization cannot fail")
    }

    /// Decode into a validated arrangement (indices shift to 0-based).
    pub fn to_arrangement(&self) -> Result<Arrangement> {
        let coeff_field = match &self.field {
            FieldFileSpec::Name(s) if s == "rationals" => FieldSpec::Rationals,
            FieldFileSpec::Name(s) => {
                return Err(Error::Parse(format!("unknown field name '{s}'")))
            }
            FieldFileSpec::MinPoly { minpoly } => {
                let mp: Vec<BigRational> =
                    minpoly.iter().map(|c| c.to_rational()).collect::<Result<_>>()?;
                FieldSpec::NumberField { min_poly: mp }
            }
        };
        let forms: Vec<Vec<FVal>> = self
            .forms
            .iter()
            .map(|row| row.iter().map(|c| c.to_fval(&coeff_field)).collect())
            .collect::<Result<_>>()?;
        let n = if forms.is_empty() {
            self.n.ok_or_else(|| Error::Parse("abstract arrangement needs explicit 'n'".into()))?
        } else {
            forms.len()
        };
        let shift = |v: &usize| -> Result<usize> {
            if *v == 0 {
                Err(Error::Parse("indices are 1-based; found 0".into()))
            } else {
                Ok(v - 1)
            }
        };
        let lattice_override = match &self.flats {
            Some(flats) => Some(
                flats
                    .iter()
                    .map(|f| f.iter().map(shift).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        let monodromy_override = match &self.monodromy {
            Some(words) => Some(
                words
                    .iter()
                    .map(|w| {
                        Ok(MonodromyGen {
                            flat: w.i.iter().map(shift).collect::<Result<Vec<_>>>()?,
                            delta: w.delta.clone(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        let arr = Arrangement {
            name: self.name.clone(),
            ambient_dim: self.ambient_dim,
            coeff_field,
            forms,
            n,
            lattice_override,
            monodromy_override,
            exponents: self.exponents.clone(),
        };
        arr.validate()?;
        Ok(arr)
    }

    /// Encode an arrangement (indices shift to 1-based).
    pub fn from_arrangement(arr: &Arrangement) -> Self {
        let field = match &arr.coeff_field {
            FieldSpec::Rationals => FieldFileSpec::Name("rationals".into()),
            FieldSpec::NumberField { min_poly } => {
                FieldFileSpec::MinPoly { minpoly: min_poly.iter().map(rational_repr).collect() }
            }
            _ => FieldFileSpec::Name("rationals".into()),
        };
        ArrangementFile {
            schema: 1,
            name: arr.name.clone(),
            ambient_dim: arr.ambient_dim,
            field,
            forms: arr
                .forms
                .iter()
                .map(|row| row.iter().map(CoeffRepr::from_fval).collect())
                .collect(),
            flats: arr
                .lattice_override
                .as_ref()
                .map(|fl| fl.iter().map(|f| f.iter().map(|i| i + 1).collect()).collect()),
            monodromy: arr.monodromy_override.as_ref().map(|ws| {
                ws.iter()
                    .map(|w| MonodromyFileGen {
                        i: w.flat.iter().map(|i| i + 1).collect(),
                        delta: w.delta.clone(),
                    })
                    .collect()
            }),
            exponents: arr.exponents.clone(),
            n: if arr.forms.is_empty() { Some(arr.n) } else { None },
        }
    }
}

// ===========================================================================
// Tests
// ===========================================================================
