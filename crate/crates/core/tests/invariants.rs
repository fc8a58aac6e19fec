use std::collections::BTreeSet;

use detpure::hseries::{
    ci_hpoly, h_closed, h_recursive, h_recursive_with_pivot, is_log_concave, is_osequence, tau,
    Pivot,
};
use detpure::level::{is_level, socle_shifts};
use detpure::matroid::{cover_h, cover_h_highest_pivot, delta0, delta0_h};
use detpure::{enumerate, validate, DegreeMatrix};

fn shapes(max_sum: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..max_sum).flat_map(move |t| (1..=max_sum - t).map(move |c| (t, c)))
}

/// Every matrix determined by a first row and first column in `[-b, b]`
/// that validates, keeping entries `<= b`.
fn brute_force(t: usize, c: usize, b: i64, zero_free: bool) -> BTreeSet<Vec<Vec<i64>>> {
    let m = t + c - 1;
    let free = m + t - 1;
    let width = (2 * b + 1) as usize;
    let mut out = BTreeSet::new();
    let mut digits = vec![0usize; free];
    loop {
        let vals: Vec<i64> = digits.iter().map(|&d| d as i64 - b).collect();
        let row = &vals[..m];
        let col: Vec<i64> = std::iter::once(row[0])
            .chain(vals[m..].iter().copied())
            .collect();
        let raw: Vec<Vec<i64>> = col
            .iter()
            .map(|&ai| row.iter().map(|&a1j| a1j + ai - row[0]).collect())
            .collect();
        let in_range = raw.iter().flatten().all(|&x| x <= b);
        let zeros_ok = !zero_free || raw.iter().flatten().all(|&x| x != 0);
        if in_range && zeros_ok && validate(&raw).is_ok() {
            out.insert(raw);
        }
        let Some(p) = digits.iter().rposition(|&d| d + 1 < width) else {
            break;
        };
        digits[p] += 1;
        for d in &mut digits[p + 1..] {
            *d = 0;
        }
    }
    out
}

#[test]
fn enumerate_matches_brute_force() {
    for (t, c) in shapes(5) {
        for b in 1..=3 {
            for zero_free in [true, false] {
                let listed: Vec<DegreeMatrix> = enumerate(t, c, b, zero_free).collect();
                let keys: BTreeSet<Vec<u8>> = listed.iter().map(|a| a.canonical_key()).collect();
                assert_eq!(keys.len(), listed.len(), "duplicates for t={t} c={c} b={b}");
                for a in &listed {
                    assert!(validate(&a.to_rows()).is_ok());
                    assert_eq!(
                        DegreeMatrix::from_canonical_key(&a.canonical_key()).unwrap(),
                        *a
                    );
                }
                let got: BTreeSet<Vec<Vec<i64>>> = listed.iter().map(|a| a.to_rows()).collect();
                assert_eq!(got, brute_force(t, c, b, zero_free), "t={t} c={c} b={b}");
            }
        }
    }
}

#[test]
fn submatrices_stay_valid() {
    for (t, c) in shapes(6) {
        for a in enumerate(t, c, 3, false) {
            for l in 1..=a.cols() {
                if c > 1 {
                    assert!(a.submatrix(None, Some(l)).is_ok(), "{a} l={l}");
                }
                for k in (1..=t).filter(|&k| t > 1 && (k >= l || k == t)) {
                    assert!(a.submatrix(Some(k), Some(l)).is_ok(), "{a} k={k} l={l}");
                }
            }
            if t > 1 && c > 1 {
                assert!(a.submatrix(Some(t), None).is_ok());
            }
        }
    }
}

#[test]
fn reduce_zeros_keeps_h() {
    for (t, c) in shapes(6) {
        for a in enumerate(t, c, 3, false) {
            let r = a.reduce_zeros();
            assert!(r.is_zero_free());
            assert_eq!(h_recursive(&r).unwrap(), h_recursive(&a).unwrap(), "{a}");
        }
    }
}

#[test]
fn equal_rows_flag() {
    for (t, c) in shapes(6) {
        for a in enumerate(t, c, 3, false) {
            let rows = a.to_rows();
            let all_equal = rows.iter().all(|r| *r == rows[0]);
            assert_eq!(a.max_equal_rows() == t, all_equal);
        }
    }
}

#[test]
fn pivots_agree_and_outputs_are_osequences() {
    for (t, c) in shapes(6) {
        for a in enumerate(t, c, 4, true) {
            let h = h_recursive(&a).unwrap();
            assert_eq!(
                h_recursive_with_pivot(&a, Pivot::TopLeft).unwrap(),
                h,
                "{a}"
            );
            assert!(is_osequence(&h), "{a}");
        }
    }
}

#[test]
fn tail_agrees_with_upper_left_block() {
    let mut checked = 0;
    for (t, c) in shapes(6) {
        for a in enumerate(t, c, 4, true) {
            let r = a.max_equal_rows();
            if r == t {
                continue;
            }
            let block = a.upper_left(r, r + c - 1);
            let h = h_recursive(&a).unwrap();
            let hb = h_recursive(&block).unwrap();
            let (s, sb) = (h.degree(), hb.degree());
            let k = ((a.get(0, 0) - a.get(r, 0)) as usize).min(sb + 1);
            for i in 0..k {
                assert_eq!(h.get(s - i), hb.get(sb - i), "{a} i={i}");
            }
            checked += 1;
        }
    }
    assert!(checked > 500);
}

#[test]
fn complete_intersections_symmetric_log_concave() {
    for n in 1..=4 {
        let mut degs = vec![1i64; n];
        loop {
            let h = ci_hpoly(&degs).unwrap();
            let v = h.as_slice();
            assert!(v.iter().eq(v.iter().rev()), "{degs:?}");
            assert!(is_log_concave(&h));
            let Some(p) = degs.iter().rposition(|&d| d < 4) else {
                break;
            };
            degs[p] += 1;
            for d in &mut degs[p + 1..] {
                *d = 1;
            }
        }
    }
}

#[test]
fn shift_count_and_levelness() {
    for (t, c) in shapes(6) {
        for a in enumerate(t, c, 4, true) {
            let s = socle_shifts(&a);
            let expect = detpure::hseries::binom((t + c - 2) as i64, (c - 1) as i64);
            assert_eq!(s.len() as u128, expect);
            assert_eq!(s.max(), tau(&a) + c as i64);
            if c >= 2 {
                assert_eq!(is_level(&a), a.has_equal_rows(), "{a}");
            } else {
                assert!(is_level(&a));
            }
        }
    }
}

#[test]
fn cover_h_pivot_independent() {
    for m in 1..=4 {
        for c in 1..=m {
            let mut sizes = vec![1usize; m];
            loop {
                let d = delta0(c, &sizes).unwrap();
                assert_eq!(
                    cover_h(&d).unwrap(),
                    cover_h_highest_pivot(&d).unwrap(),
                    "{sizes:?}"
                );
                let Some(p) = sizes.iter().rposition(|&a| a < 2) else {
                    break;
                };
                sizes[p] += 1;
                for a in &mut sizes[p + 1..] {
                    *a = 1;
                }
            }
        }
    }
}

#[test]
fn delta0_matches_equal_rows_matrices() {
    for t in 1..=3 {
        for c in 1..=3 {
            for a in enumerate(t, c, 3, true).filter(DegreeMatrix::has_equal_rows) {
                let sizes: Vec<usize> = a.row(0).iter().map(|&x| x as usize).collect();
                assert_eq!(
                    delta0_h(c, &sizes).unwrap(),
                    h_recursive(&a).unwrap(),
                    "{a}"
                );
                assert_eq!(h_closed(&a).unwrap(), h_recursive(&a).unwrap());
            }
        }
    }
}
