//! Shannon functions and the Shannon entropy `SE(cl)`.
//!
//! A Shannon function for `cl` is `r: 2^V -> Q` with `0 <= r(X) <= |X|`,
//! monotone, submodular and `r(X) = r(cl(X))`. `SE(cl)` is the maximum of
//! `r(V)`; it bounds the entropy of every coding function from above.
//!
//! Since `r` is constant on closure classes, the LP has one variable per
//! closed set. The bound `r(X) <= |X|` becomes `r(C) <= irk(C)`, and
//! submodularity only needs incomparable closed pairs plus monotonicity on
//! covering pairs of the closed-set lattice.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::closure::{closed_sets, require_pairs, Axiom, ClosureOperator, ValidationReport};
use crate::error::{Error, Result};
use crate::lp::Problem;
use crate::partition::Entropy;
use crate::ranks::RankProfile;
use crate::subset::{all_subsets, Subset};

/// Closed-set cap for [`LpMode::Reduced`].
pub const MAX_CLOSED_SETS: usize = 4096;
/// Vertex cap for [`LpMode::Full`] and for [`verify_shannon_function`].
pub const FULL_MAX_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LpMode {
    /// Rows over the closed-set lattice only.
    #[default]
    Reduced,
    /// Every row of the definition over all `2^n` subsets, folded onto
    /// closed-set variables.
    Full,
}

impl core::str::FromStr for LpMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reduced" => Ok(LpMode::Reduced),
            "full" => Ok(LpMode::Full),
            other => Err(Error::InvalidArgument(alloc::format!(
                "unknown LP mode {other:?}, expected reduced or full"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShannonSolution {
    /// `SE(cl)`.
    pub value: BigRational,
    /// Closed sets in ascending bit order.
    pub closed: Vec<Subset>,
    /// Optimal `r(C)` for each closed set.
    pub witness: Vec<BigRational>,
    /// Rows of the full LP.
    pub rows: usize,
    /// Rows the solver activated before every row was satisfied.
    pub active_rows: usize,
    pub pivots: usize,
}

impl ShannonSolution {
    /// The witness extended to every subset by `r(X) = r(cl(X))`.
    pub fn extend(&self, op: &ClosureOperator) -> Vec<BigRational> {
        extend_from_closed(op, &self.closed, &self.witness)
    }
}

fn int(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

/// Builds the LP; the objective is `r(V)`.
pub fn shannon_lp(op: &ClosureOperator, mode: LpMode) -> Result<(Problem, Vec<Subset>)> {
    if mode == LpMode::Full {
        require_pairs(op.n(), FULL_MAX_N, "full Shannon LP")?;
    }
    let profile = RankProfile::compute(op)?;
    let closed = closed_sets(op)?;
    if closed.len() > MAX_CLOSED_SETS {
        return Err(Error::TooLarge {
            what: "Shannon LP closed sets",
            n: closed.len(),
            cap: MAX_CLOSED_SETS,
        });
    }
    let index: BTreeMap<Subset, usize> = closed.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let var = |x: Subset| index[&op.close(x)];
    let mut rows = RowSet::default();

    match mode {
        LpMode::Reduced => {
            for (i, &c) in closed.iter().enumerate() {
                rows.bound(i, profile.irk(c));
            }
            for (i, &c) in closed.iter().enumerate() {
                for d in upper_covers(op, c) {
                    rows.push(&[(i, 1), (index[&d], -1)], 0);
                }
            }
            for (i, &c) in closed.iter().enumerate() {
                for (j, &d) in closed.iter().enumerate().skip(i + 1) {
                    if c.is_subset_of(d) || d.is_subset_of(c) {
                        continue;
                    }
                    rows.push(&[(var(c | d), 1), (index[&(c & d)], 1), (i, -1), (j, -1)], 0);
                }
            }
        }
        LpMode::Full => {
            let n = op.n();
            for x in all_subsets(n) {
                rows.bound(var(x), x.len());
                for v in (1..=n).filter(|&v| !x.contains(v)) {
                    rows.push(&[(var(x), 1), (var(x.with(v)), -1)], 0);
                }
            }
            for x in all_subsets(n) {
                for y in all_subsets(n).filter(|y| y.bits() > x.bits()) {
                    rows.push(&[(var(x | y), 1), (var(x & y), 1), (var(x), -1), (var(y), -1)], 0);
                }
            }
        }
    }

    let mut lp = Problem::new(closed.len());
    lp.objective[var(op.ground())] = BigRational::one();
    rows.emit(&mut lp);
    Ok((lp, closed))
}

/// Closed sets covering `c`: the minimal ones among `cl(c ∪ v)`.
fn upper_covers(op: &ClosureOperator, c: Subset) -> Vec<Subset> {
    let mut candidates: Vec<Subset> = (1..=op.n())
        .filter(|&v| !c.contains(v))
        .map(|v| op.close(c.with(v)))
        .collect();
    candidates.sort();
    candidates.dedup();
    candidates
        .iter()
        .copied()
        .filter(|&d| !candidates.iter().any(|&e| e != d && e.is_subset_of(d)))
        .collect()
}

#[derive(Default)]
struct RowSet {
    bounds: BTreeMap<usize, usize>,
    rows: BTreeSet<Vec<(usize, i64)>>,
}

impl RowSet {
    fn bound(&mut self, var: usize, cap: usize) {
        let slot = self.bounds.entry(var).or_insert(cap);
        *slot = (*slot).min(cap);
    }

    /// Adds `Σ coeff * r_var <= rhs` with `rhs = 0`, merging repeated
    /// variables and dropping rows that cancel.
    fn push(&mut self, terms: &[(usize, i64)], rhs: i64) {
        debug_assert_eq!(rhs, 0);
        let mut merged: BTreeMap<usize, i64> = BTreeMap::new();
        for &(v, a) in terms {
            *merged.entry(v).or_insert(0) += a;
        }
        let row: Vec<(usize, i64)> = merged.into_iter().filter(|(_, a)| *a != 0).collect();
        // rows with no positive coefficient hold for every x >= 0
        if row.iter().any(|(_, a)| *a > 0) {
            self.rows.insert(row);
        }
    }

    fn emit(self, lp: &mut Problem) {
        for (v, cap) in self.bounds {
            lp.push(alloc::vec![(v, int(1))], int(cap as i64));
        }
        for row in self.rows {
            lp.push(row.into_iter().map(|(v, a)| (v, int(a))).collect(), int(0));
        }
    }
}

/// Rows added per round of row generation.
const ROW_BATCH: usize = 16;

/// `SE(cl)` by exact simplex, with an optimal Shannon function.
///
/// Bound rows start active; monotonicity and submodular rows are added
/// only when the current optimum violates them.
pub fn shannon_entropy(op: &ClosureOperator, mode: LpMode) -> Result<ShannonSolution> {
    let (lp, closed) = shannon_lp(op, mode)?;
    let start: Vec<usize> = (0..lp.rows.len()).filter(|&i| lp.rows[i].coeffs.len() == 1).collect();
    let (solution, active_rows) = lp.solve_by_row_generation(&start, ROW_BATCH)?;
    debug_assert!(lp.certify(&solution));
    Ok(ShannonSolution {
        value: solution.value,
        closed,
        witness: solution.primal,
        rows: lp.rows.len(),
        active_rows,
        pivots: solution.pivots,
    })
}

/// `r(X) := r(cl(X))` from values on the closed sets.
pub fn extend_from_closed(
    op: &ClosureOperator,
    closed: &[Subset],
    values: &[BigRational],
) -> Vec<BigRational> {
    let index: BTreeMap<Subset, usize> = closed.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    all_subsets(op.n())
        .map(|x| values[index[&op.close(x)]].clone())
        .collect()
}

/// Checks the four Shannon-function axioms over all subsets.
pub fn verify_shannon_function(op: &ClosureOperator, values: &[BigRational]) -> Result<ValidationReport> {
    let exact: Vec<Entropy> = values.iter().cloned().map(Entropy::Exact).collect();
    verify_shannon_entropies(op, &exact)
}

/// [`verify_shannon_function`] for values that may be floating point, such
/// as coding-function entropies; comparisons use the entropy tolerance.
pub fn verify_shannon_entropies(op: &ClosureOperator, values: &[Entropy]) -> Result<ValidationReport> {
    let n = op.n();
    require_pairs(n, FULL_MAX_N, "Shannon-function check")?;
    if values.len() != 1 << n {
        return Err(Error::InvalidArgument(alloc::format!(
            "{} values for {} subsets",
            values.len(),
            1usize << n
        )));
    }
    let r = |x: Subset| &values[x.bits() as usize];
    let mut report = ValidationReport::default();
    for x in all_subsets(n) {
        if !Entropy::zero().le(r(x)) || !r(x).le(&Entropy::integer(x.len())) {
            report.push(Axiom::Bounded, alloc::vec![x]);
        }
    }
    for x in all_subsets(n) {
        for v in (1..=n).filter(|&v| !x.contains(v)) {
            if !r(x).le(r(x.with(v))) {
                report.push(Axiom::Increasing, alloc::vec![x, x.with(v)]);
            }
        }
    }
    for x in all_subsets(n) {
        for i in (1..=n).filter(|&i| !x.contains(i)) {
            for j in (i + 1..=n).filter(|&j| !x.contains(j)) {
                let (a, b) = (x.with(i), x.with(j));
                if !r(a | b).add(r(x)).le(&r(a).add(r(b))) {
                    report.push(Axiom::Submodular, alloc::vec![a, b]);
                }
            }
        }
    }
    for x in all_subsets(n) {
        let cx = op.close(x);
        if !r(x).same(r(cx)) {
            report.push(Axiom::ClosureInvariant, alloc::vec![x, cx]);
        }
    }
    Ok(report)
}

/// `r'(X) := r(X ∩ V1) + r(X ∪ V1) - r(V1)`.
///
/// Fails when `r'` is not a Shannon function for `op`, when it is not
/// additive across `V1`/`V2`, or when `r'(V) != r(V)`.
pub fn split_shannon(op: &ClosureOperator, values: &[BigRational], v1: Subset) -> Result<Vec<BigRational>> {
    let n = op.n();
    if !v1.fits(n) {
        return Err(Error::MaskOutOfRange { mask: v1, n });
    }
    let report = verify_shannon_function(op, values)?;
    if let Some(v) = report.first() {
        return Err(Error::InvalidArgument(alloc::format!(
            "input is not a Shannon function: {} at {:?}",
            v.axiom,
            v.witness
        )));
    }
    let r = |x: Subset| &values[x.bits() as usize];
    let split: Vec<BigRational> = all_subsets(n)
        .map(|x| r(x & v1) + r(x | v1) - r(v1))
        .collect();
    let v2 = v1.complement(n);
    let s = |x: Subset| &split[x.bits() as usize];
    for x in all_subsets(n) {
        if *s(x) != s(x & v1) + s(x & v2) {
            return Err(Error::InvalidArgument(alloc::format!(
                "split function is not additive at {x}"
            )));
        }
    }
    if s(op.ground()) != r(op.ground()) {
        return Err(Error::InvalidArgument("split function changes r(V)".into()));
    }
    let report = verify_shannon_function(op, &split)?;
    if let Some(v) = report.first() {
        return Err(Error::InvalidArgument(alloc::format!(
            "split function fails {} at {:?}",
            v.axiom,
            v.witness
        )));
    }
    Ok(split)
}

/// `r(X) = 0` on the closure class of the empty set and `1` elsewhere.
pub fn unit_shannon_function(op: &ClosureOperator) -> Vec<BigRational> {
    let base = op.close(Subset::EMPTY);
    all_subsets(op.n())
        .map(|x| if op.close(x) == base { int(0) } else { int(1) })
        .collect()
}

/// True when every value is a nonnegative rational not above `r`.
pub fn within_rank(values: &[BigRational], rank: usize) -> bool {
    let cap = int(rank as i64);
    values.iter().all(|v| !v.is_negative() && *v <= cap)
}

pub fn value_is_zero(v: &BigRational) -> bool {
    v.is_zero()
}
