//! h-vectors of degree matrices.
//!
//! Two independent routes are provided: [`h_recursive`], which peels off the
//! bottom-right entry with the basic double link recursion, and [`h_closed`],
//! which sums shifted complete-intersection polynomials over selector
//! sequences. They are cross-checked in the test suite.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::degree_matrix::DegreeMatrix;
use crate::error::{Error, Result};

/// Coefficients `(h_0, ..., h_s)` of an h-polynomial (or any finite
/// nonnegative sequence), trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HVector(Vec<u64>);

impl HVector {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        HVector(coeffs)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `s = tau(h)`, the degree of the polynomial.
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    /// `h_i`, or 0 past the end.
    pub fn get(&self, i: usize) -> u64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn last(&self) -> u64 {
        *self.0.last().unwrap()
    }
}

impl From<Vec<u64>> for HVector {
    fn from(v: Vec<u64>) -> Self {
        HVector::new(v)
    }
}

impl fmt::Display for HVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Binomial coefficient with `binom(a, b) = 0` whenever `b < 0` or `a < b`.
///
/// Returns `None` on `u128` overflow.
pub fn binom_checked(a: i64, b: i64) -> Option<u128> {
    if b < 0 || a < b {
        return Some(0);
    }
    let b = b.min(a - b) as u128;
    let a = a as u128;
    let mut acc: u128 = 1;
    for k in 0..b {
        // acc * (a-k) is divisible by (k+1) after the multiplication
        acc = acc.checked_mul(a - k)? / (k + 1);
    }
    Some(acc)
}

/// See [`binom_checked`]. Panics on overflow.
pub fn binom(a: i64, b: i64) -> u128 {
    binom_checked(a, b).expect("binomial coefficient overflows u128")
}

fn add_into(acc: &mut Vec<u64>, p: &[u64], shift: usize) -> Result<()> {
    if acc.len() < p.len() + shift {
        acc.resize(p.len() + shift, 0);
    }
    for (k, &x) in p.iter().enumerate() {
        let slot = &mut acc[k + shift];
        *slot = slot.checked_add(x).ok_or(Error::Overflow("h-vector"))?;
    }
    Ok(())
}

/// `p(z) * (1 + z + ... + z^(k-1))`.
fn mul_geometric(p: &[u64], k: usize) -> Result<Vec<u64>> {
    debug_assert!(k >= 1);
    let mut out = vec![0u64; p.len() + k - 1];
    // sliding window sum over p
    let mut window: u64 = 0;
    for (n, slot) in out.iter_mut().enumerate() {
        if n < p.len() {
            window = window
                .checked_add(p[n])
                .ok_or(Error::Overflow("h-vector"))?;
        }
        if n >= k {
            window -= p[n - k];
        }
        *slot = window;
    }
    Ok(out)
}

fn positive_usize(d: i64, what: &'static str) -> Result<usize> {
    if d < 1 {
        return Err(Error::PreconditionFailed(format!(
            "{what} must be positive, got {d}"
        )));
    }
    usize::try_from(d).map_err(|_| Error::Overflow(what))
}

/// h-polynomial `prod (1 + z + ... + z^(d_i - 1))` of a complete
/// intersection of type `degrees`. The empty product is `(1)`.
pub fn ci_hpoly(degrees: &[i64]) -> Result<HVector> {
    let mut p = vec![1u64];
    for &d in degrees {
        p = mul_geometric(&p, positive_usize(d, "complete intersection degree")?)?;
    }
    Ok(HVector::new(p))
}

fn ones(len: i64) -> Result<Vec<u64>> {
    Ok(vec![1; positive_usize(len, "trace")?])
}

/// Pivot used by the recursion. Only [`Pivot::BottomRight`] is used in
/// production; the other exists to test pivot independence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pivot {
    /// `(t, t+c-1)`: always legal since `a_{t,t+c-1} >= a_{t,t} > 0`.
    BottomRight,
    /// `(1, 1)`.
    TopLeft,
}

/// h-vector of the standard determinantal ring with degree matrix `a`.
///
/// Zero entries are removed first (deleting a zero's row and column keeps
/// the h-vector). Base cases are `c = 1` (all ones, length `trace(A)`) and
/// `t = 1` (a complete intersection).
pub fn h_recursive(a: &DegreeMatrix) -> Result<HVector> {
    h_recursive_with_pivot(a, Pivot::BottomRight)
}

pub fn h_recursive_with_pivot(a: &DegreeMatrix, pivot: Pivot) -> Result<HVector> {
    let mut memo = HashMap::new();
    recurse(a, pivot, &mut memo).map(HVector::new)
}

fn recurse(
    a: &DegreeMatrix,
    pivot: Pivot,
    memo: &mut HashMap<Vec<u8>, Vec<u64>>,
) -> Result<Vec<u64>> {
    if let Some((i, j)) = a.first_zero() {
        return recurse(&a.submatrix(Some(i + 1), Some(j + 1))?, pivot, memo);
    }
    if a.c() == 1 {
        return ones(a.trace());
    }
    if a.t() == 1 {
        return ci_hpoly(a.row(0)).map(HVector::into_vec);
    }
    let key = a.canonical_key();
    if let Some(hit) = memo.get(&key) {
        return Ok(hit.clone());
    }

    let (k, l) = match pivot {
        Pivot::BottomRight => (a.t(), a.cols()),
        Pivot::TopLeft => (1, 1),
    };
    let w = a.get(k - 1, l - 1);
    let w = positive_usize(w, "pivot entry")?;
    let deleted_both = recurse(&a.submatrix(Some(k), Some(l))?, pivot, memo)?;
    let deleted_col = recurse(&a.submatrix(None, Some(l))?, pivot, memo)?;

    // z^w * hp(A^(k,l)) + (1 + ... + z^(w-1)) * hp(A^(0,l))
    let mut out = mul_geometric(&deleted_col, w)?;
    add_into(&mut out, &deleted_both, w)?;
    memo.insert(key, out.clone());
    Ok(out)
}

/// Closed-form h-polynomial as a sum over selector sequences
/// `0 < i_1 < ... < i_(c-1) < t+c-1`.
///
/// Each selector contributes `z^e * hp_ci(g)` where `e` sums the entries
/// `a_{i, j_i}` over the unselected columns `j_1 < j_2 < ...` up to
/// `i_(c-1)`, and `g` collects `a_{i_k-(k-1), i_k}` for each selector plus
/// the trailing diagonal sum `sum_{i >= i_(c-1)-(c-2)} a_{i, i+c-1}`.
pub fn h_closed(a: &DegreeMatrix) -> Result<HVector> {
    let t = a.t();
    let b = a.c() - 1;
    let m = a.cols();
    // 1-based accessor to keep the index arithmetic readable
    let at = |i: usize, j: usize| a.get(i - 1, j - 1);

    let mut total = vec![0u64];
    let mut sel: Vec<usize> = (1..=b).collect();
    loop {
        let last = sel.last().copied().unwrap_or(0);
        let unselected: Vec<usize> = (1..=last).filter(|j| !sel.contains(j)).collect();
        debug_assert_eq!(unselected.len(), last - b);
        let e: i64 = unselected
            .iter()
            .enumerate()
            .map(|(idx, &j)| at(idx + 1, j))
            .sum();

        let mut g: Vec<i64> = sel
            .iter()
            .enumerate()
            .map(|(k, &ik)| at(ik - k, ik))
            .collect();
        let start = if b == 0 { 1 } else { last + 1 - b };
        g.push((start..=t).map(|i| at(i, i + b)).sum());

        let ci = ci_hpoly(&g)?;
        let shift = usize::try_from(e)
            .map_err(|_| Error::PreconditionFailed("negative exponent in closed formula".into()))?;
        add_into(&mut total, ci.as_slice(), shift)?;

        if !next_combination(&mut sel, m - 1) {
            break;
        }
    }
    Ok(HVector::new(total))
}

/// Lexicographic successor of a strictly increasing sequence in `1..=n`.
pub(crate) fn next_combination(sel: &mut [usize], n: usize) -> bool {
    let k = sel.len();
    let mut p = k;
    while p > 0 {
        p -= 1;
        if sel[p] < n - (k - 1 - p) {
            sel[p] += 1;
            for q in p + 1..k {
                sel[q] = sel[q - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `tau(h^A) = a_11 + ... + a_1c + a_{2,c+1} + ... + a_{t,t+c-1} - c`,
/// evaluated on the zero-reduced matrix.
pub fn tau(a: &DegreeMatrix) -> i64 {
    let a = a.reduce_zeros();
    let c = a.c();
    let top: i64 = a.row(0)[..c].iter().sum();
    let diag: i64 = (1..a.t()).map(|i| a.get(i, i + c - 1)).sum();
    top + diag - c as i64
}

/// Last h-entry `binom(r+c-2, c-1)`, evaluated on the zero-reduced matrix.
pub fn last_entry(a: &DegreeMatrix) -> u128 {
    let a = a.reduce_zeros();
    let r = a.max_equal_rows() as i64;
    let c = a.c() as i64;
    binom(r + c - 2, c - 1)
}

/// `h_{s-i}` for a degree matrix with equal rows, by the alternating
/// tail formula. Legal for `0 <= i < a_{r+1}`, where `a_{r+1}` is the
/// common value of column `r+1` (for `c = 1`, all `0 <= i <= s`).
pub fn tail_equal_rows(a: &DegreeMatrix, i: usize) -> Result<u128> {
    if !a.has_equal_rows() {
        return Err(Error::RowsNotEqual);
    }
    let r = a.t();
    let c = a.c();
    let row = a.row(0);
    let limit = if c == 1 {
        a.trace() as usize
    } else {
        row[r] as usize
    };
    if i >= limit {
        return Err(Error::IndexOutOfRange {
            index: i,
            bound: limit,
        });
    }

    let (r, ci, ii) = (r as i64, c as i64, i as i64);
    let mut acc: i128 = (binom(r + ci - 2, ci - 1) * binom(ci + ii - 1, ci - 1)) as i128;
    for alpha in 1..c {
        let coeff = binom(r - alpha as i64 + ci - 2, ci - 1 - alpha as i64) as i128;
        if coeff == 0 {
            continue;
        }
        let mut inner: i128 = 0;
        let mut sel: Vec<usize> = (0..alpha).collect();
        if alpha <= r as usize {
            loop {
                let s: i64 = sel.iter().map(|&j| row[j]).sum();
                inner += binom(ci + ii - 1 - s, ci - 1) as i128;
                if !next_combination_zero(&mut sel, r as usize) {
                    break;
                }
            }
        }
        let term = coeff * inner;
        if alpha % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    u128::try_from(acc).map_err(|_| Error::PreconditionFailed("negative tail value".into()))
}

fn next_combination_zero(sel: &mut [usize], n: usize) -> bool {
    // 0-based indices in 0..n
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

/// `h_i^2 >= h_{i-1} h_{i+1}` for every interior index.
pub fn is_log_concave(h: &HVector) -> bool {
    h.as_slice()
        .windows(3)
        .all(|w| (w[1] as u128) * (w[1] as u128) >= (w[0] as u128) * (w[2] as u128))
}

/// Smallest `i <= s/2` with `h_i > h_{s-i}`, or `None` when flawless.
pub fn is_flawless(h: &HVector) -> Option<usize> {
    let s = h.degree();
    (0..=s / 2).find(|&i| h.get(i) > h.get(s - i))
}

/// Upper bound `n^<i>` on `h_{i+1}` given `h_i = n`, from the `i`-th
/// binomial representation of `n`.
pub fn macaulay_bound(n: u64, i: usize) -> u128 {
    assert!(i >= 1);
    let mut rest = n as u128;
    let mut out: u128 = 0;
    let mut j = i as i64;
    while rest > 0 && j >= 1 {
        // largest k with binom(k, j) <= rest
        let mut k = j;
        while binom(k + 1, j) <= rest {
            k += 1;
        }
        rest -= binom(k, j);
        out += binom(k + 1, j + 1);
        j -= 1;
    }
    out
}

/// Whether `h` satisfies Macaulay's growth conditions, i.e.
/// `h_0 = 1` and `h_{i+1} <= h_i^<i>` for all `i >= 1`.
pub fn is_osequence(h: &HVector) -> bool {
    osequence_violation(h).is_none()
}

/// First index `i+1` where Macaulay's condition fails (0 if `h_0 != 1`).
pub fn osequence_violation(h: &HVector) -> Option<usize> {
    let v = h.as_slice();
    if v[0] != 1 {
        return Some(0);
    }
    (1..v.len().saturating_sub(1))
        .find(|&i| v[i + 1] as u128 > macaulay_bound(v[i], i))
        .map(|i| i + 1)
}
