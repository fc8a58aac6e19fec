//! Socle degrees from the last module of the Eagon–Northcott resolution.

use serde::{Deserialize, Serialize};

use crate::degree_matrix::DegreeMatrix;
use crate::error::{Error, Result};
use crate::hseries::{binom, h_recursive, tau};

/// Twists of the last free module, as positive degrees, sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SocleShifts(Vec<i64>);

impl SocleShifts {
    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> i64 {
        self.0[0]
    }

    pub fn min(&self) -> i64 {
        self.0[self.0.len() - 1]
    }

    pub fn distinct(&self) -> Vec<i64> {
        let mut out = self.0.clone();
        out.dedup();
        out
    }

    pub fn is_constant(&self) -> bool {
        self.max() == self.min()
    }
}

/// Shifts `a_{k_1,1} + ... + a_{k_{c-1},c-1} + a_{1,c} + ... + a_{t,t+c-1}`
/// over all `1 <= k_1 <= ... <= k_{c-1} <= t`, on the zero-reduced matrix.
pub fn socle_shifts(a: &DegreeMatrix) -> SocleShifts {
    let a = a.reduce_zeros();
    let t = a.t();
    let c = a.c();
    let base: i64 = (0..t).map(|i| a.get(i, i + c - 1)).sum();
    let mut out = Vec::new();
    let mut ks = vec![0usize; c - 1];
    loop {
        out.push(
            base + ks
                .iter()
                .enumerate()
                .map(|(j, &k)| a.get(k, j))
                .sum::<i64>(),
        );
        // next non-decreasing sequence in 0..t
        let Some(p) = ks.iter().rposition(|&k| k + 1 < t) else {
            break;
        };
        let v = ks[p] + 1;
        for k in &mut ks[p..] {
            *k = v;
        }
    }
    out.sort_unstable_by(|x, y| y.cmp(x));
    debug_assert_eq!(out.len() as u128, binom((t + c - 2) as i64, (c - 1) as i64));
    SocleShifts(out)
}

/// All socle shifts coincide. For `c >= 2` this happens exactly when the
/// (zero-reduced) matrix has equal rows.
pub fn is_level(a: &DegreeMatrix) -> bool {
    let level = socle_shifts(a).is_constant();
    let reduced = a.reduce_zeros();
    if reduced.c() >= 2 {
        assert_eq!(
            level,
            reduced.has_equal_rows(),
            "levelness disagrees with the equal-rows test on {a}"
        );
    }
    level
}

/// `(socle degree, Cohen–Macaulay type)` of a level scheme.
pub fn level_type(a: &DegreeMatrix) -> Result<(i64, u128)> {
    if !is_level(a) {
        return Err(Error::NotLevel);
    }
    let reduced = a.reduce_zeros();
    let (t, c) = (reduced.t() as i64, reduced.c() as i64);
    let out = (tau(&reduced), binom(t + c - 2, c - 1));
    let h = h_recursive(&reduced)?;
    assert_eq!(
        (h.degree() as i64, h.last() as u128),
        out,
        "level type disagrees with the h-vector of {a}"
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> DegreeMatrix {
        DegreeMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn shifts_of_c() {
        let c = m(&[&[3, 3, 3, 3], &[1, 1, 1, 1]]);
        let s = socle_shifts(&c);
        assert_eq!(s.as_slice(), &[10, 8, 6]);
        assert_eq!(s.max(), tau(&c) + 3);
        assert!(!is_level(&c));
    }

    #[test]
    fn codimension_one_and_ci() {
        let a = m(&[&[2, 3], &[1, 2]]);
        assert_eq!(socle_shifts(&a).as_slice(), &[4]);
        assert!(is_level(&a));

        let ci = m(&[&[2, 3]]);
        assert_eq!(socle_shifts(&ci).as_slice(), &[5]);
        assert_eq!(level_type(&ci).unwrap(), (3, 1));
    }

    #[test]
    fn equal_rows_types() {
        assert_eq!(level_type(&m(&[&[2, 2]])).unwrap(), (2, 1));
        assert_eq!(level_type(&m(&[&[1, 1, 1], &[1, 1, 1]])).unwrap(), (1, 2));
        assert_eq!(
            level_type(&m(&[&[1, 1, 1, 1], &[1, 1, 1, 1], &[1, 1, 1, 1]])).unwrap(),
            (2, 3)
        );
    }

    #[test]
    fn unequal_rows_not_level() {
        let a = m(&[&[2, 2, 2], &[1, 1, 1]]);
        assert_eq!(socle_shifts(&a).as_slice(), &[5, 4]);
        assert!(!is_level(&a));
        assert_eq!(level_type(&a), Err(Error::NotLevel));
    }
}
