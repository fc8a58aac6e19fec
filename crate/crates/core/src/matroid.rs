//! Simplicial complexes, the transversal matroid `Δ₀(c, m, a)` and cover
//! ideal h-vectors.
//!
//! Vertex labels are `1..=64`; faces are stored as `u64` bitmasks with label
//! `v` at bit `v - 1`. The link/deletion recursion in [`cover_h`] is
//! exponential and meant for small complexes; [`delta0_h`] is the scalable
//! route for `Δ₀`.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hseries::{ci_hpoly, HVector};

pub const MAX_VERTICES: u32 = 64;

/// A simplicial complex given by its facets over an explicit ground set.
///
/// Ground vertices contained in no facet are allowed (they show up in duals
/// and links); they contribute free variables and never change h-vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    ground: u64,
    // sorted, pairwise incomparable
    facets: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    ground: Vec<u32>,
    facets: Vec<Vec<u32>>,
}

fn bit(v: u32) -> u64 {
    1u64 << (v - 1)
}

fn labels(mask: u64) -> Vec<u32> {
    (1..=MAX_VERTICES).filter(|&v| mask & bit(v) != 0).collect()
}

fn maximal(faces: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let all: BTreeSet<u64> = faces.into_iter().collect();
    all.iter()
        .copied()
        .filter(|&f| !all.iter().any(|&g| g != f && f & g == f))
        .collect()
}

impl SimplicialComplex {
    /// Builds the complex generated by `faces` on `ground` (defaults to the
    /// union of the faces). Non-maximal faces are dropped.
    pub fn new(ground: Option<&[u32]>, faces: &[Vec<u32>]) -> Result<Self> {
        let to_mask = |vs: &[u32]| -> Result<u64> {
            vs.iter().try_fold(0u64, |acc, &v| {
                if v == 0 || v > MAX_VERTICES {
                    Err(Error::BadParams(format!("vertex label {v} outside 1..=64")))
                } else {
                    Ok(acc | bit(v))
                }
            })
        };
        let masks = faces
            .iter()
            .map(|f| to_mask(f))
            .collect::<Result<Vec<_>>>()?;
        if masks.is_empty() {
            return Err(Error::BadParams("a complex needs at least one face".into()));
        }
        let support = masks.iter().fold(0, |a, f| a | f);
        let ground = match ground {
            Some(g) => to_mask(g)?,
            None => support,
        };
        if support & !ground != 0 {
            return Err(Error::BadParams(
                "face uses a vertex outside the ground set".into(),
            ));
        }
        Ok(SimplicialComplex {
            ground,
            facets: maximal(masks),
        })
    }

    /// The full simplex on `1..=n`.
    pub fn simplex(n: u32) -> Result<Self> {
        let vs: Vec<u32> = (1..=n).collect();
        SimplicialComplex::new(Some(&vs), std::slice::from_ref(&vs))
    }

    fn from_masks(ground: u64, faces: impl IntoIterator<Item = u64>) -> Self {
        SimplicialComplex {
            ground,
            facets: maximal(faces),
        }
    }

    pub fn ground(&self) -> Vec<u32> {
        labels(self.ground)
    }

    pub fn facets(&self) -> Vec<Vec<u32>> {
        self.facets.iter().map(|&f| labels(f)).collect()
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    /// Vertices lying in some facet.
    pub fn support(&self) -> Vec<u32> {
        labels(self.facets.iter().fold(0, |a, f| a | f))
    }

    pub fn dimension(&self) -> i32 {
        self.facets
            .iter()
            .map(|f| f.count_ones() as i32)
            .max()
            .unwrap_or(0)
            - 1
    }

    pub fn is_pure(&self) -> bool {
        self.facets
            .windows(2)
            .all(|w| w[0].count_ones() == w[1].count_ones())
    }

    pub fn contains_face(&self, face: &[u32]) -> bool {
        let mask = face.iter().fold(0u64, |a, &v| a | bit(v));
        self.contains_mask(mask)
    }

    fn contains_mask(&self, mask: u64) -> bool {
        self.facets.iter().any(|&f| f & mask == mask)
    }

    /// Every face, as bitmasks.
    fn faces(&self) -> HashSet<u64> {
        let mut out = HashSet::new();
        for &f in &self.facets {
            // all submasks of f
            let mut sub = f;
            loop {
                out.insert(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & f;
            }
        }
        out
    }

    fn check_vertex(&self, v: u32) -> Result<u64> {
        if v == 0 || v > MAX_VERTICES || self.ground & bit(v) == 0 {
            return Err(Error::UnknownVertex(v));
        }
        Ok(bit(v))
    }

    /// `{F : v ∉ F, F ∪ {v} ∈ Δ}` on the ground set minus `v`.
    pub fn link(&self, v: u32) -> Result<Self> {
        let b = self.check_vertex(v)?;
        Ok(self.link_mask(b))
    }

    fn link_mask(&self, b: u64) -> Self {
        let faces: Vec<u64> = self
            .facets
            .iter()
            .filter(|&&f| f & b != 0)
            .map(|&f| f & !b)
            .collect();
        if faces.is_empty() {
            // v is in no face: the link is the void complex, modelled as {∅}
            return SimplicialComplex::from_masks(self.ground & !b, [0]);
        }
        SimplicialComplex::from_masks(self.ground & !b, faces)
    }

    /// `{F ∈ Δ : v ∉ F}` on the ground set minus `v`.
    pub fn deletion(&self, v: u32) -> Result<Self> {
        let b = self.check_vertex(v)?;
        Ok(self.deletion_mask(b))
    }

    fn deletion_mask(&self, b: u64) -> Self {
        SimplicialComplex::from_masks(self.ground & !b, self.facets.iter().map(|&f| f & !b))
    }

    /// `v` lies in every facet.
    pub fn is_cone_point(&self, v: u32) -> Result<bool> {
        let b = self.check_vertex(v)?;
        Ok(self.facets.iter().all(|&f| f & b != 0))
    }

    /// Exchange property, checked over all pairs of faces with
    /// `|F| = |G| + 1` (equivalent to all pairs with `|G| < |F|`).
    pub fn is_matroid(&self) -> bool {
        let faces = self.faces();
        let mut by_size: Vec<Vec<u64>> = vec![Vec::new(); 65];
        for &f in &faces {
            by_size[f.count_ones() as usize].push(f);
        }
        for k in 0..64 {
            for &g in &by_size[k] {
                for &f in &by_size[k + 1] {
                    let mut extra = f & !g;
                    let mut ok = false;
                    while extra != 0 {
                        let low = extra & extra.wrapping_neg();
                        if faces.contains(&(g | low)) {
                            ok = true;
                            break;
                        }
                        extra &= extra - 1;
                    }
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Complement complex: facets `ground ∖ F`. Requires all facets to have
    /// the same size.
    pub fn dual(&self) -> Result<Self> {
        if !self.is_pure() {
            return Err(Error::NotPure);
        }
        Ok(SimplicialComplex::from_masks(
            self.ground,
            self.facets.iter().map(|&f| self.ground & !f),
        ))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.json()).expect("plain integers serialize")
    }

    fn json(&self) -> ComplexJson {
        ComplexJson {
            ground: self.ground(),
            facets: self.facets(),
        }
    }
}

impl Serialize for SimplicialComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimplicialComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ComplexJson::deserialize(d)?;
        SimplicialComplex::new(Some(&raw.ground), &raw.facets).map_err(serde::de::Error::custom)
    }
}

/// h-vector of `S/J(Δ)` for the cover ideal `J(Δ) = ⋂_F (x_i : i ∈ F)`,
/// intersected over the facets of a matroid `Δ`.
///
/// Uses `h^Δ_i = h^{Δ∖v}_{i-1} + h^{lk v}_i` at the lowest-labeled vertex
/// that lies in some but not every facet; a complex without such a vertex
/// is a simplex (plus unused vertices) and has h-vector `(1)`.
pub fn cover_h(delta: &SimplicialComplex) -> Result<HVector> {
    if !delta.is_matroid() {
        return Err(Error::NotAMatroid);
    }
    let mut memo = HashMap::new();
    Ok(HVector::new(cover_rec(delta, &mut memo)))
}

/// Same recursion as [`cover_h`] but pivoting on the highest-labeled
/// admissible vertex; used to check pivot independence.
pub fn cover_h_highest_pivot(delta: &SimplicialComplex) -> Result<HVector> {
    if !delta.is_matroid() {
        return Err(Error::NotAMatroid);
    }
    let mut memo = HashMap::new();
    Ok(HVector::new(cover_rec_with(delta, &mut memo, true)))
}

fn cover_rec(delta: &SimplicialComplex, memo: &mut HashMap<Vec<u64>, Vec<u64>>) -> Vec<u64> {
    cover_rec_with(delta, memo, false)
}

fn cover_rec_with(
    delta: &SimplicialComplex,
    memo: &mut HashMap<Vec<u64>, Vec<u64>>,
    highest: bool,
) -> Vec<u64> {
    let support = delta.facets.iter().fold(0u64, |a, f| a | f);
    let cone = delta.facets.iter().fold(u64::MAX, |a, f| a & f);
    let candidates = support & !cone;
    if candidates == 0 {
        return vec![1];
    }
    if let Some(hit) = memo.get(&delta.facets) {
        return hit.clone();
    }
    let b = if highest {
        1u64 << (63 - candidates.leading_zeros())
    } else {
        candidates & candidates.wrapping_neg()
    };
    let del = cover_rec_with(&delta.deletion_mask(b), memo, highest);
    let lk = cover_rec_with(&delta.link_mask(b), memo, highest);
    let mut out = vec![0u64; (del.len() + 1).max(lk.len())];
    for (i, x) in del.iter().enumerate() {
        out[i + 1] += x;
    }
    for (i, x) in lk.iter().enumerate() {
        out[i] += x;
    }
    memo.insert(delta.facets.clone(), out.clone());
    out
}

fn check_params(c: usize, sizes: &[usize]) -> Result<()> {
    let m = sizes.len();
    if c < 1 || c > m {
        return Err(Error::BadParams(format!(
            "need 1 <= c <= m, got c={c}, m={m}"
        )));
    }
    if sizes.contains(&0) {
        return Err(Error::BadParams("group sizes must be positive".into()));
    }
    Ok(())
}

/// `Δ₀(c, m, a)`: facets pick one vertex from each of `c` distinct groups.
/// Group `i` holds the labels following those of groups `1..i`.
pub fn delta0(c: usize, sizes: &[usize]) -> Result<SimplicialComplex> {
    check_params(c, sizes)?;
    let n: usize = sizes.iter().sum();
    if n > MAX_VERTICES as usize {
        return Err(Error::BadParams(format!(
            "{n} vertices exceed the 64-vertex limit"
        )));
    }
    let mut groups = Vec::with_capacity(sizes.len());
    let mut next = 0u32;
    for &a in sizes {
        groups.push((next..next + a as u32).collect::<Vec<u32>>());
        next += a as u32;
    }

    let mut facets = Vec::new();
    let mut chosen: Vec<usize> = (0..c).collect();
    loop {
        let mut partial = vec![0u64];
        for &g in &chosen {
            partial = partial
                .iter()
                .flat_map(|&p| groups[g].iter().map(move |&v| p | (1u64 << v)))
                .collect();
        }
        facets.extend(partial);
        if !next_subset(&mut chosen, sizes.len()) {
            break;
        }
    }
    let ground = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Ok(SimplicialComplex::from_masks(ground, facets))
}

fn next_subset(sel: &mut [usize], n: usize) -> bool {
    let k = sel.len();
    let mut p = k;
    while p > 0 {
        p -= 1;
        if sel[p] < n - k + p {
            sel[p] += 1;
            for q in p + 1..k {
                sel[q] = sel[q - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// h-vector of `Δ₀(c, m, a)` by removing the last group one vertex at a time:
/// `h_i = h(c, m-1)_{i-a_m} + Σ_{k<a_m} h(c-1, m-1)_{i-k}`.
pub fn delta0_h(c: usize, sizes: &[usize]) -> Result<HVector> {
    check_params(c, sizes)?;
    let mut memo = HashMap::new();
    delta0_rec(c, sizes, &mut memo).map(HVector::new)
}

fn delta0_rec(
    c: usize,
    sizes: &[usize],
    memo: &mut HashMap<(usize, usize), Vec<u64>>,
) -> Result<Vec<u64>> {
    let m = sizes.len();
    if c == 1 {
        return Ok(vec![1; sizes.iter().sum()]);
    }
    if c == m {
        let degs: Vec<i64> = sizes.iter().map(|&a| a as i64).collect();
        return ci_hpoly(&degs).map(HVector::into_vec);
    }
    if let Some(hit) = memo.get(&(c, m)) {
        return Ok(hit.clone());
    }
    let am = sizes[m - 1];
    let rest = &sizes[..m - 1];
    let same = delta0_rec(c, rest, memo)?;
    let lower = delta0_rec(c - 1, rest, memo)?;
    let mut out = vec![0u64; (same.len() + am).max(lower.len() + am - 1)];
    for (i, x) in same.iter().enumerate() {
        out[i + am] = out[i + am]
            .checked_add(*x)
            .ok_or(Error::Overflow("h-vector"))?;
    }
    for (i, x) in lower.iter().enumerate() {
        for k in 0..am {
            out[i + k] = out[i + k]
                .checked_add(*x)
                .ok_or(Error::Overflow("h-vector"))?;
        }
    }
    memo.insert((c, m), out.clone());
    Ok(out)
}

/// A `c x (a_1 + ... + a_m)` integer matrix representing `Δ₀(c, m, a)`:
/// the columns of group `i` all equal the Vandermonde vector
/// `(1, t_i, ..., t_i^(c-1))` with `t_i = i - 1`.
pub fn represent_delta0(c: usize, sizes: &[usize]) -> Result<Vec<Vec<i64>>> {
    check_params(c, sizes)?;
    let mut rows = vec![Vec::new(); c];
    for (i, &a) in sizes.iter().enumerate() {
        let t = i as i64;
        for _ in 0..a {
            let mut p = 1i64;
            for row in rows.iter_mut() {
                row.push(p);
                p = p
                    .checked_mul(t)
                    .ok_or(Error::Overflow("Vandermonde entry"))?;
            }
        }
    }
    Ok(rows)
}

/// Rank over the rationals of the given columns of `matrix`.
pub fn column_rank(matrix: &[Vec<i64>], cols: &[usize]) -> usize {
    let mut m: Vec<Vec<BigRational>> = matrix
        .iter()
        .map(|row| {
            cols.iter()
                .map(|&j| BigRational::from_integer(BigInt::from(row[j])))
                .collect()
        })
        .collect();
    let nrows = m.len();
    let ncols = cols.len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = BigRational::one() / m[rank][col].clone();
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col].clone() * inv.clone();
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= factor.clone() * p.clone();
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// The column matroid of `matrix` as a complex on labels `1..=ncols`:
/// facets are the maximal sets of linearly independent columns.
pub fn column_matroid(matrix: &[Vec<i64>]) -> Result<SimplicialComplex> {
    let ncols = matrix.first().map_or(0, Vec::len);
    if ncols == 0 || ncols > 20 {
        return Err(Error::BadParams(format!(
            "column matroid of {ncols} columns"
        )));
    }
    let independent: Vec<u64> = (0u64..1 << ncols)
        .filter(|mask| {
            let cols: Vec<usize> = (0..ncols).filter(|j| mask >> j & 1 == 1).collect();
            cols.len() <= matrix.len() && column_rank(matrix, &cols) == cols.len()
        })
        .collect();
    Ok(SimplicialComplex::from_masks(
        (1u64 << ncols) - 1,
        independent,
    ))
}
