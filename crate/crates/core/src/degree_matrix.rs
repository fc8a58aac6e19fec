//! Degree matrices of standard determinantal ideals.
//!
//! A degree matrix is a `t x (t+c-1)` integer matrix `A = (a_ij)` with
//! `a_ij = b_j - a_i` for nondecreasing row/column degree sequences. Entries
//! therefore increase from left to right and from the bottom to the top, and
//! every 2x2 pattern balances. We also require a positive diagonal.
//!
//! The validated input is stored verbatim; nothing is re-sorted.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated degree matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeMatrix {
    rows: usize,
    cols: usize,
    // row-major
    entries: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct RowsJson {
    rows: Vec<Vec<i64>>,
}

impl DegreeMatrix {
    /// Validates `raw` and wraps it. See [`validate`].
    pub fn new(raw: Vec<Vec<i64>>) -> Result<Self> {
        validate(&raw)
    }

    /// Number of rows `t`.
    pub fn t(&self) -> usize {
        self.rows
    }

    /// Codimension `c = cols - rows + 1`.
    pub fn c(&self) -> usize {
        self.cols - self.rows + 1
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at 0-based `(row, col)`.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[i64] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn trace(&self) -> i64 {
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn max_entry(&self) -> i64 {
        // top-right corner dominates
        self.get(0, self.cols - 1)
    }

    /// First zero entry in row-major order, 0-based.
    pub fn first_zero(&self) -> Option<(usize, usize)> {
        self.entries
            .iter()
            .position(|&e| e == 0)
            .map(|p| (p / self.cols, p % self.cols))
    }

    pub fn is_zero_free(&self) -> bool {
        self.first_zero().is_none()
    }

    /// Errors with [`Error::ContainsZero`] (1-based position) unless zero-free.
    pub fn require_zero_free(&self) -> Result<()> {
        match self.first_zero() {
            Some((i, j)) => Err(Error::ContainsZero {
                row: i + 1,
                col: j + 1,
            }),
            None => Ok(()),
        }
    }

    /// Deletes row `row` and/or column `col` (both 1-based).
    ///
    /// `submatrix(Some(k), Some(l))` is `A^(k,l)`, `submatrix(Some(k), None)`
    /// is `A^(k,0)` and `submatrix(None, Some(l))` is `A^(0,l)`. The result is
    /// re-validated: deleting a column, or row `k` and column `l` with
    /// `k >= l` or `k = t`, always succeeds; other deletions can move a
    /// nonpositive entry onto the diagonal.
    pub fn submatrix(&self, row: Option<usize>, col: Option<usize>) -> Result<Self> {
        if row.is_none() && col.is_none() {
            return Err(Error::Shape(
                "submatrix needs a row or a column to delete".into(),
            ));
        }
        if let Some(k) = row {
            if k == 0 || k > self.rows {
                return Err(Error::IndexOutOfRange {
                    index: k,
                    bound: self.rows + 1,
                });
            }
            if self.rows == 1 {
                return Err(Error::Shape("cannot delete the only row".into()));
            }
        }
        if let Some(l) = col {
            if l == 0 || l > self.cols {
                return Err(Error::IndexOutOfRange {
                    index: l,
                    bound: self.cols + 1,
                });
            }
        }
        let new_rows = self.rows - row.is_some() as usize;
        let new_cols = self.cols - col.is_some() as usize;
        if new_rows > new_cols || new_cols == 0 {
            return Err(Error::Shape(format!(
                "deletion leaves a {new_rows}x{new_cols} matrix"
            )));
        }
        let raw: Vec<Vec<i64>> = (0..self.rows)
            .filter(|&i| Some(i + 1) != row)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| Some(j + 1) != col)
                    .map(|j| self.get(i, j))
                    .collect()
            })
            .collect();
        validate(&raw)
    }

    /// The upper-left `rows x cols` block (no validation beyond shape).
    pub fn upper_left(&self, rows: usize, cols: usize) -> Self {
        debug_assert!(rows >= 1 && rows <= cols && rows <= self.rows && cols <= self.cols);
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            entries.extend_from_slice(&self.row(i)[..cols]);
        }
        DegreeMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Repeatedly deletes the row and column through a zero entry until the
    /// matrix is zero-free. The h-vector is unchanged by each step.
    pub fn reduce_zeros(&self) -> Self {
        let mut cur = self.clone();
        while let Some((i, j)) = cur.first_zero() {
            // zeros sit strictly below the diagonal, so t >= 2 here
            cur = cur
                .submatrix(Some(i + 1), Some(j + 1))
                .expect("deleting through a zero keeps a valid degree matrix");
        }
        cur
    }

    /// `r = max{i : a_11 = ... = a_i1}`, the number of maximal equal rows.
    pub fn max_equal_rows(&self) -> usize {
        let top = self.get(0, 0);
        (0..self.rows)
            .take_while(|&i| self.get(i, 0) == top)
            .count()
    }

    pub fn has_equal_rows(&self) -> bool {
        self.max_equal_rows() == self.rows
    }

    /// Injective byte encoding: `rows`, `cols` as little-endian u32, then
    /// entries as little-endian i64 in row-major order.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + 8 * self.entries.len());
        out.extend_from_slice(&(self.rows as u32).to_le_bytes());
        out.extend_from_slice(&(self.cols as u32).to_le_bytes());
        for e in &self.entries {
            out.extend_from_slice(&e.to_le_bytes());
        }
        out
    }

    /// Inverse of [`canonical_key`](Self::canonical_key).
    pub fn from_canonical_key(key: &[u8]) -> Result<Self> {
        let bad = || Error::Parse("malformed canonical key".into());
        if key.len() < 8 {
            return Err(bad());
        }
        let rows = u32::from_le_bytes(key[0..4].try_into().unwrap()) as usize;
        let cols = u32::from_le_bytes(key[4..8].try_into().unwrap()) as usize;
        let body = &key[8..];
        if body.len() != rows * cols * 8 {
            return Err(bad());
        }
        let entries: Vec<i64> = body
            .chunks_exact(8)
            .map(|ch| i64::from_le_bytes(ch.try_into().unwrap()))
            .collect();
        let raw = entries
            .chunks(cols.max(1))
            .map(|r| r.to_vec())
            .collect::<Vec<_>>();
        validate(&raw)
    }

    /// Parses either the whitespace text format (one row per line) or the
    /// JSON object `{"rows": [[...], ...]}`.
    pub fn parse(input: &str) -> Result<Self> {
        if input.trim_start().starts_with('{') {
            Self::from_json(input)
        } else {
            Self::from_text(input)
        }
    }

    pub fn from_text(input: &str) -> Result<Self> {
        let mut raw = Vec::new();
        for (n, line) in input.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<i64>()
                        .map_err(|e| Error::Parse(format!("line {}: {tok:?}: {e}", n + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            raw.push(row);
        }
        validate(&raw)
    }

    pub fn from_json(input: &str) -> Result<Self> {
        let parsed: RowsJson =
            serde_json::from_str(input).map_err(|e| Error::Parse(e.to_string()))?;
        validate(&parsed.rows)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&RowsJson {
            rows: self.to_rows(),
        })
        .expect("plain integers serialize")
    }
}

impl fmt::Display for DegreeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line = self
                .row(i)
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl Serialize for DegreeMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RowsJson {
            rows: self.to_rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DegreeMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RowsJson::deserialize(d)?;
        validate(&raw.rows).map_err(serde::de::Error::custom)
    }
}

/// Checks shape, ordering, homogeneity and the positive diagonal, in that
/// order, reporting the first violation (1-based positions).
pub fn validate(raw: &[Vec<i64>]) -> Result<DegreeMatrix> {
    let rows = raw.len();
    if rows == 0 {
        return Err(Error::Shape("matrix has no rows".into()));
    }
    let cols = raw[0].len();
    if let Some(bad) = raw.iter().position(|r| r.len() != cols) {
        return Err(Error::Shape(format!(
            "row {} has {} entries, expected {cols}",
            bad + 1,
            raw[bad].len()
        )));
    }
    if rows > cols {
        return Err(Error::Shape(format!(
            "{rows}x{cols} matrix has more rows than columns"
        )));
    }

    for i in 0..rows {
        for j in 0..cols {
            if j + 1 < cols && raw[i][j] > raw[i][j + 1] {
                return Err(Error::NotOrdered {
                    row: i + 1,
                    col: j + 1,
                    reason: "row decreases to the right",
                });
            }
            if i + 1 < rows && raw[i][j] < raw[i + 1][j] {
                return Err(Error::NotOrdered {
                    row: i + 1,
                    col: j + 1,
                    reason: "column increases downward",
                });
            }
        }
    }

    // a_ij + a_11 = a_i1 + a_1j for all i,j is equivalent to every 2x2 balance
    for i in 1..rows {
        for j in 1..cols {
            let lhs = raw[i][j] as i128 + raw[0][0] as i128;
            let rhs = raw[i][0] as i128 + raw[0][j] as i128;
            if lhs != rhs {
                return Err(Error::NotHomogeneous {
                    i: 1,
                    k: i + 1,
                    j: 1,
                    l: j + 1,
                });
            }
        }
    }

    if let Some(i) = (0..rows).find(|&i| raw[i][i] <= 0) {
        return Err(Error::NonPositiveDiagonal(i + 1));
    }

    Ok(DegreeMatrix {
        rows,
        cols,
        entries: raw.iter().flatten().copied().collect(),
    })
}

/// Every degree matrix of shape `t x (t+c-1)` with entries at most
/// `entry_bound`, each exactly once.
///
/// Matrices are parametrized by a nondecreasing first row with `a_11 >= 1`
/// and nondecreasing row offsets `0 = u_1 <= ... <= u_t`, with
/// `a_ij = a_1j - u_i`. The stream is in lexicographic order of
/// `(first row, offsets)`.
pub fn enumerate(t: usize, c: usize, entry_bound: i64, zero_free: bool) -> Enumerate {
    assert!(t >= 1 && c >= 1, "t and c must be positive");
    let m = t + c - 1;
    let first_row = if entry_bound >= 1 {
        Some(vec![1; m])
    } else {
        None
    };
    let mut it = Enumerate {
        t,
        bound: entry_bound,
        zero_free,
        first_row,
        offsets: None,
    };
    it.offsets = it.first_row.as_ref().map(|_| vec![0; t]);
    it
}

/// Iterator returned by [`enumerate`].
#[derive(Debug, Clone)]
pub struct Enumerate {
    t: usize,
    bound: i64,
    zero_free: bool,
    first_row: Option<Vec<i64>>,
    offsets: Option<Vec<i64>>,
}

impl Enumerate {
    fn advance_first_row(&mut self) {
        let Some(row) = self.first_row.as_mut() else {
            return;
        };
        // lexicographic successor among nondecreasing sequences in [1, bound]
        let m = row.len();
        let mut p = m;
        while p > 0 {
            p -= 1;
            if row[p] < self.bound {
                let v = row[p] + 1;
                for x in &mut row[p..] {
                    *x = v;
                }
                self.offsets = Some(vec![0; self.t]);
                return;
            }
        }
        self.first_row = None;
        self.offsets = None;
    }

    fn advance_offsets(&mut self) -> bool {
        let row = self.first_row.as_ref().unwrap();
        let u = self.offsets.as_mut().unwrap();
        let t = u.len();
        // u_i <= a_1i - 1 keeps the diagonal positive; u_1 stays 0
        let mut p = t;
        while p > 1 {
            p -= 1;
            let v = u[p] + 1;
            if (p..t).all(|q| v < row[q]) {
                for x in &mut u[p..] {
                    *x = v;
                }
                return true;
            }
        }
        false
    }

    fn current(&self) -> Option<DegreeMatrix> {
        let row = self.first_row.as_ref()?;
        let u = self.offsets.as_ref()?;
        let cols = row.len();
        let mut entries = Vec::with_capacity(self.t * cols);
        for &ui in u {
            entries.extend(row.iter().map(|a| a - ui));
        }
        let mat = DegreeMatrix {
            rows: self.t,
            cols,
            entries,
        };
        let diag_ok = (0..self.t).all(|i| mat.get(i, i) > 0);
        (diag_ok && (!self.zero_free || mat.is_zero_free())).then_some(mat)
    }
}

impl Iterator for Enumerate {
    type Item = DegreeMatrix;

    fn next(&mut self) -> Option<DegreeMatrix> {
        loop {
            self.first_row.as_ref()?;
            let cand = self.current();
            if !self.advance_offsets() {
                self.advance_first_row();
            }
            if cand.is_some() {
                return cand;
            }
        }
    }
}
