//! Monomial order ideals and the pure O-sequence decision.
//!
//! A sequence `h = (1, h_1, ..., h_s)` is a pure O-sequence iff it is the
//! f-vector of an order ideal whose maximal monomials all have degree `s`.
//! Such an ideal uses exactly `h_1` variables, so the search runs over
//! `h_s`-element sets of degree-`s` monomials in `h_1` variables, one set per
//! orbit of the variable-permutation action.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::degree_matrix::DegreeMatrix;
use crate::error::{Error, Result};
use crate::hseries::{self, binom, HVector};

/// A monomial `y_1^e_1 ... y_c^e_c`, stored as its exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    /// The monomial `1` in `nvars` variables.
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// Exponentwise `self <= other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// All divisors, including `1` and `self`.
    pub fn divisors(&self) -> Vec<Monomial> {
        let mut out = vec![Monomial::one(self.nvars())];
        for (v, &e) in self.0.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for d in &out {
                for k in 0..=e {
                    let mut m = d.clone();
                    m.0[v] = k;
                    next.push(m);
                }
            }
            out = next;
        }
        out
    }

    /// Moves the exponent of variable `v` to variable `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Monomial {
        let mut out = vec![0; self.0.len()];
        for (v, &e) in self.0.iter().enumerate() {
            out[perm[v]] = e;
        }
        Monomial(out)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| match e {
                1 => format!("y{}", v + 1),
                _ => format!("y{}^{}", v + 1, e),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A finite division-closed set of monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderIdeal {
    nvars: usize,
    monomials: BTreeSet<Monomial>,
    generators: Vec<Monomial>,
}

impl OrderIdeal {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn monomials(&self) -> &BTreeSet<Monomial> {
        &self.monomials
    }

    /// Division-maximal elements, sorted.
    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.monomials.contains(m)
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// All generators share one degree.
    pub fn is_pure(&self) -> bool {
        self.generators
            .windows(2)
            .all(|w| w[0].degree() == w[1].degree())
    }

    /// `f_i = #{M in ideal : deg M = i}`.
    pub fn f_vector(&self) -> HVector {
        let top = self
            .monomials
            .iter()
            .map(Monomial::degree)
            .max()
            .unwrap_or(0);
        let mut f = vec![0u64; top as usize + 1];
        for m in &self.monomials {
            f[m.degree() as usize] += 1;
        }
        HVector::new(f)
    }
}

/// Smallest order ideal containing `generators`.
pub fn close_under_division(generators: &[Monomial]) -> Result<OrderIdeal> {
    let first = generators.first().ok_or(Error::EmptyGenerators)?;
    let nvars = first.nvars();
    if generators.iter().any(|g| g.nvars() != nvars) {
        return Err(Error::MixedArity);
    }
    let monomials: BTreeSet<Monomial> = generators.iter().flat_map(|g| g.divisors()).collect();
    let gens: BTreeSet<&Monomial> = generators.iter().collect();
    let maximal: Vec<Monomial> = gens
        .iter()
        .filter(|g| !gens.iter().any(|h| h != *g && g.divides(h)))
        .map(|g| (*g).clone())
        .collect();
    Ok(OrderIdeal {
        nvars,
        monomials,
        generators: maximal,
    })
}

/// f-vector of an order ideal.
pub fn f_vector(ideal: &OrderIdeal) -> HVector {
    ideal.f_vector()
}

/// The pure order ideal in `c` variables whose f-vector is the h-vector of
/// an equal-rows degree matrix with row `(a_1, ..., a_m)`.
///
/// One generator per way of cutting `1..=m` into `c` consecutive nonempty
/// blocks; the exponent of `y_k` is the sum of `a_i` over block `k`, minus 1.
pub fn gamma_from_matrix(a: &DegreeMatrix) -> Result<OrderIdeal> {
    if !a.has_equal_rows() {
        return Err(Error::RowsNotEqual);
    }
    a.require_zero_free()?;
    let row = a.row(0);
    let m = row.len();
    let c = a.c();

    let mut gens = Vec::new();
    // cut points l_1 < ... < l_(c-1) in 2..=m, 1-based start of each block
    let mut cuts: Vec<usize> = (2..=c).collect();
    loop {
        let mut bounds = Vec::with_capacity(c + 1);
        bounds.push(1);
        bounds.extend_from_slice(&cuts);
        bounds.push(m + 1);
        let exps: Vec<u32> = bounds
            .windows(2)
            .map(|w| {
                let s: i64 = row[w[0] - 1..w[1] - 1].iter().sum();
                u32::try_from(s - 1).expect("block sums are positive")
            })
            .collect();
        gens.push(Monomial(exps));
        if !advance_cuts(&mut cuts, m) {
            break;
        }
    }
    close_under_division(&gens)
}

fn advance_cuts(cuts: &mut [usize], m: usize) -> bool {
    // strictly increasing values in 2..=m
    let k = cuts.len();
    let mut p = k;
    while p > 0 {
        p -= 1;
        if cuts[p] < m - (k - 1 - p) {
            cuts[p] += 1;
            for q in p + 1..k {
                cuts[q] = cuts[q - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Why a sequence (or a matrix's h-vector) is not a pure O-sequence.
///
/// The `rule` tag names the criterion that fired.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum NotPureReason {
    /// Macaulay's growth condition fails at `index` (0 when `h_0 != 1`).
    #[serde(rename = "macaulay")]
    NotOSequence { index: usize },
    /// `h_index > h_(s-index)` with `index <= s/2`.
    #[serde(rename = "hibi-flawless")]
    NotFlawless { index: usize },
    /// `h_index` exceeds the monomial/divisor counting bound.
    #[serde(rename = "rem:bound")]
    DivisorBoundViolated { index: usize },
    /// Codimension two with unequal rows.
    #[serde(rename = "codim2")]
    Codim2UnequalRows,
    /// `r < t` and `a_{r+1,1} > 0`.
    #[serde(rename = "ar+1,1>0")]
    PositiveSubmaximalRow,
    /// `a_{2,1} < 0`; `index` is the flawlessness violation `a_11`.
    #[serde(rename = "nohibi")]
    NegativeSecondRow { index: usize },
    /// Every orbit of candidate generator sets was checked.
    #[serde(rename = "exhausted-search")]
    ExhaustedSearch { nodes: u64 },
}

impl NotPureReason {
    pub fn rule(&self) -> &'static str {
        match self {
            NotPureReason::NotOSequence { .. } => "macaulay",
            NotPureReason::NotFlawless { .. } => "hibi-flawless",
            NotPureReason::DivisorBoundViolated { .. } => "rem:bound",
            NotPureReason::Codim2UnequalRows => "codim2",
            NotPureReason::PositiveSubmaximalRow => "ar+1,1>0",
            NotPureReason::NegativeSecondRow { .. } => "nohibi",
            NotPureReason::ExhaustedSearch { .. } => "exhausted-search",
        }
    }

    /// Whether the verdict came from a shortcut rather than the search.
    pub fn is_shortcut(&self) -> bool {
        !matches!(self, NotPureReason::ExhaustedSearch { .. })
    }
}

/// How a pure witness was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PureRule {
    /// The Γ construction for equal rows.
    #[serde(rename = "equal-rows")]
    EqualRows,
    /// Codimension one: `(1, ..., 1)` is the f-vector of a single power.
    #[serde(rename = "codim1")]
    Codim1,
    #[serde(rename = "search")]
    Search,
}

/// Which budget was exhausted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitHit {
    Nodes,
    WallClock,
}

/// Outcome of a purity decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum PurityVerdict {
    Pure {
        rule: PureRule,
        /// Degree-`s` generators; their closure has f-vector `h`.
        witness: Vec<Monomial>,
    },
    NotPure {
        #[serde(flatten)]
        reason: NotPureReason,
    },
    Inconclusive {
        limit: LimitHit,
        nodes: u64,
    },
}

impl PurityVerdict {
    pub fn is_pure(&self) -> bool {
        matches!(self, PurityVerdict::Pure { .. })
    }

    pub fn is_not_pure(&self) -> bool {
        matches!(self, PurityVerdict::NotPure { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, PurityVerdict::Inconclusive { .. })
    }

    /// Short label: the rule for decided verdicts, `inconclusive` otherwise.
    pub fn label(&self) -> String {
        match self {
            PurityVerdict::Pure { rule, .. } => format!(
                "pure:{}",
                match rule {
                    PureRule::EqualRows => "equal-rows",
                    PureRule::Codim1 => "codim1",
                    PureRule::Search => "search",
                }
            ),
            PurityVerdict::NotPure { reason } => format!("not-pure:{}", reason.rule()),
            PurityVerdict::Inconclusive { .. } => "inconclusive".to_string(),
        }
    }

    fn not_pure(reason: NotPureReason) -> Self {
        PurityVerdict::NotPure { reason }
    }
}

/// Budget for the exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Candidate (partial) generator sets visited.
    pub max_nodes: u64,
    pub max_duration: Option<Duration>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_nodes: 10_000_000,
            max_duration: Some(Duration::from_secs(60)),
        }
    }
}

impl SearchLimits {
    /// Node budget only; results are then fully deterministic.
    pub fn nodes(max_nodes: u64) -> Self {
        SearchLimits {
            max_nodes,
            max_duration: None,
        }
    }
}

/// First necessary condition for purity that `h` fails: Macaulay's
/// conditions, then flawlessness, then the divisor-counting bound
/// `h_(s-i) <= min(binom(n-1+s-i, n-1), h_s * binom(n-1+i, n-1))` with
/// `n = h_1`.
pub fn screen(h: &HVector) -> Option<NotPureReason> {
    if let Some(index) = hseries::osequence_violation(h) {
        return Some(NotPureReason::NotOSequence { index });
    }
    if let Some(index) = hseries::is_flawless(h) {
        return Some(NotPureReason::NotFlawless { index });
    }
    let s = h.degree();
    if s == 0 {
        return None;
    }
    let n = h.get(1) as i64;
    let top = h.last() as u128;
    for i in 0..=s {
        let by_monomials = binom(n - 1 + (s - i) as i64, n - 1);
        let by_divisors = top.saturating_mul(binom(n - 1 + i as i64, n - 1));
        if h.get(s - i) as u128 > by_monomials.min(by_divisors) {
            return Some(NotPureReason::DivisorBoundViolated { index: s - i });
        }
    }
    None
}

/// Screens `h`, then falls back to [`exhaustive_search`].
pub fn is_pure_osequence(h: &HVector, limits: &SearchLimits) -> PurityVerdict {
    match screen(h) {
        Some(reason) => PurityVerdict::not_pure(reason),
        None => exhaustive_search(h, limits),
    }
}

/// All monomials of degree exactly `d` in `n` variables, lexicographically
/// descending by exponent vector.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

// Variable permutations beyond this count are not used for pruning; the
// search stays exhaustive, only without orbit reduction.
const MAX_SYMMETRY_VARS: usize = 6;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn zeros(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn or_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    fn count_range(&self, lo: usize, hi: usize) -> u64 {
        (lo..hi)
            .filter(|&i| self.0[i / 64] >> (i % 64) & 1 == 1)
            .count() as u64
    }
}

struct Search<'a> {
    h: &'a [u64],
    top: Vec<Monomial>,
    divisor_bits: Vec<Bits>,
    // degree d occupies bit positions degree_start[d]..degree_start[d+1]
    degree_start: Vec<usize>,
    perm_images: Vec<Vec<usize>>,
    need: usize,
    nodes: u64,
    limits: SearchLimits,
    started: Instant,
    stop: Option<LimitHit>,
}

impl Search<'_> {
    fn counts_fit(&self, bits: &Bits, exact: bool) -> bool {
        (0..self.h.len()).all(|d| {
            let got = bits.count_range(self.degree_start[d], self.degree_start[d + 1]);
            if exact {
                got == self.h[d]
            } else {
                got <= self.h[d]
            }
        })
    }

    fn is_canonical(&self, chosen: &[usize]) -> bool {
        let mut image = Vec::with_capacity(chosen.len());
        self.perm_images.iter().all(|map| {
            image.clear();
            image.extend(chosen.iter().map(|&i| map[i]));
            image.sort_unstable();
            image.as_slice() >= chosen
        })
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            self.stop = Some(LimitHit::Nodes);
        } else if self.nodes.is_multiple_of(1024) {
            if let Some(max) = self.limits.max_duration {
                if self.started.elapsed() > max {
                    self.stop = Some(LimitHit::WallClock);
                }
            }
        }
        self.stop.is_none()
    }

    fn dfs(&mut self, chosen: &mut Vec<usize>, union: &Bits) -> bool {
        if chosen.len() == self.need {
            return self.counts_fit(union, true);
        }
        let remaining = self.need - chosen.len();
        let first = chosen.last().map_or(0, |&l| l + 1);
        for next in first..=self.top.len().saturating_sub(remaining) {
            if !self.tick() {
                return false;
            }
            chosen.push(next);
            let mut grown = union.clone();
            grown.or_assign(&self.divisor_bits[next]);
            if self.is_canonical(chosen)
                && self.counts_fit(&grown, false)
                && self.dfs(chosen, &grown)
            {
                return true;
            }
            chosen.pop();
            if self.stop.is_some() {
                return false;
            }
        }
        false
    }
}

/// Decides purity by exhaustive search, without screening.
///
/// Candidate sets are increasing index sequences into the degree-`s`
/// monomials (ordered as in [`monomials_of_degree`]), visited in
/// lexicographic order; a set is expanded only if it is lexicographically
/// minimal in its orbit under variable permutations. Partial sets are
/// pruned as soon as some degree has more divisors than `h` allows. The
/// first hit is therefore the lexicographically smallest canonical witness.
pub fn exhaustive_search(h: &HVector, limits: &SearchLimits) -> PurityVerdict {
    let v = h.as_slice();
    if v[0] != 1 {
        return PurityVerdict::not_pure(NotPureReason::NotOSequence { index: 0 });
    }
    let s = h.degree();
    if s == 0 {
        return PurityVerdict::Pure {
            rule: PureRule::Search,
            witness: vec![Monomial::one(1)],
        };
    }
    let n = v[1] as usize;
    let need = h.last() as usize;

    let per_degree: Vec<Vec<Monomial>> =
        (0..=s as u32).map(|d| monomials_of_degree(n, d)).collect();
    let mut degree_start = vec![0usize];
    for ms in &per_degree {
        degree_start.push(degree_start.last().unwrap() + ms.len());
    }
    let total = *degree_start.last().unwrap();
    let index: HashMap<&Monomial, usize> = per_degree
        .iter()
        .flatten()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();

    let top = per_degree[s].clone();
    if need > top.len() {
        return PurityVerdict::not_pure(NotPureReason::ExhaustedSearch { nodes: 0 });
    }
    let divisor_bits: Vec<Bits> = top
        .iter()
        .map(|m| {
            let mut b = Bits::zeros(total);
            for d in m.divisors() {
                b.set(index[&d]);
            }
            b
        })
        .collect();

    let perm_images: Vec<Vec<usize>> = if n <= MAX_SYMMETRY_VARS {
        let top_index: HashMap<&Monomial, usize> =
            top.iter().enumerate().map(|(i, m)| (m, i)).collect();
        permutations(n)
            .into_iter()
            .skip(1) // identity
            .map(|p| top.iter().map(|m| top_index[&m.permuted(&p)]).collect())
            .collect()
    } else {
        Vec::new()
    };

    let mut search = Search {
        h: v,
        top,
        divisor_bits,
        degree_start,
        perm_images,
        need,
        nodes: 0,
        limits: *limits,
        started: Instant::now(),
        stop: None,
    };
    let mut chosen = Vec::with_capacity(need);
    let found = search.dfs(&mut chosen, &Bits::zeros(total));
    if found {
        return PurityVerdict::Pure {
            rule: PureRule::Search,
            witness: chosen.iter().map(|&i| search.top[i].clone()).collect(),
        };
    }
    match search.stop {
        Some(limit) => PurityVerdict::Inconclusive {
            limit,
            nodes: search.nodes,
        },
        None => PurityVerdict::not_pure(NotPureReason::ExhaustedSearch {
            nodes: search.nodes,
        }),
    }
}

/// The flawlessness violation predicted when `a_21 < 0`: `i_0 = a_11`.
///
/// Returns `Some(i_0)` when `h_(i_0) > h_(s-i_0)` with `i_0 <= s/2` holds on
/// the computed h-vector, `None` if it does not.
pub fn hibi_violation_index(a: &DegreeMatrix) -> Result<Option<usize>> {
    a.require_zero_free()?;
    if a.t() < 2 || a.get(1, 0) >= 0 {
        return Err(Error::PreconditionFailed(
            "needs at least two rows and a negative entry a_21".into(),
        ));
    }
    let h = hseries::h_recursive(a)?;
    let i0 = a.get(0, 0) as usize;
    let s = h.degree();
    let holds = i0 <= s / 2 && h.get(i0) > h.get(s - i0);
    Ok(holds.then_some(i0))
}

/// Purity verdict for the h-vector of a zero-free degree matrix.
///
/// Decision order: codimension one and equal rows are pure (with witness);
/// then the codimension-two, `a_{r+1,1} > 0` and `a_21 < 0` shortcuts; then
/// [`is_pure_osequence`] on the computed h-vector.
pub fn purity_of_matrix(a: &DegreeMatrix, limits: &SearchLimits) -> Result<PurityVerdict> {
    a.require_zero_free()?;
    let h = hseries::h_recursive(a)?;

    if a.c() == 1 {
        let s = u32::try_from(h.degree()).map_err(|_| Error::Overflow("degree"))?;
        return Ok(PurityVerdict::Pure {
            rule: PureRule::Codim1,
            witness: vec![Monomial(vec![s])],
        });
    }
    if a.has_equal_rows() {
        let gamma = gamma_from_matrix(a)?;
        assert_eq!(gamma.f_vector(), h, "f-vector of the equal-rows witness");
        return Ok(PurityVerdict::Pure {
            rule: PureRule::EqualRows,
            witness: gamma.generators().to_vec(),
        });
    }
    if a.c() == 2 {
        return Ok(PurityVerdict::not_pure(NotPureReason::Codim2UnequalRows));
    }
    let r = a.max_equal_rows();
    if a.get(r, 0) > 0 {
        return Ok(PurityVerdict::not_pure(
            NotPureReason::PositiveSubmaximalRow,
        ));
    }
    if a.get(1, 0) < 0 {
        if let Some(index) = hibi_violation_index(a)? {
            return Ok(PurityVerdict::not_pure(NotPureReason::NegativeSecondRow {
                index,
            }));
        }
    }
    Ok(is_pure_osequence(&h, limits))
}

/// Checks a pure witness against `h`: all generators have degree `s` and
/// their closure has f-vector `h`.
pub fn verify_witness(h: &HVector, witness: &[Monomial]) -> bool {
    let s = h.degree() as u64;
    witness.iter().all(|m| m.degree() == s)
        && close_under_division(witness).is_ok_and(|ideal| ideal.f_vector() == *h)
}
