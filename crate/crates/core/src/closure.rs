//! The closure-operator abstraction and its exhaustive checks.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::subset::{all_subsets, Subset, MAX_VERTICES};

/// Largest `n` for which a full `2^n` table (or sweep) is allowed.
pub const TABLE_MAX_N: usize = 20;
/// Operators up to this size are materialized on construction.
pub const EAGER_MAX_N: usize = 16;
/// Default cap for sweeps over pairs of subsets (`4^n` work).
pub const PAIR_SWEEP_MAX_N: usize = 13;

const UNSET: u64 = u64::MAX;

type Rule = Arc<dyn Fn(Subset) -> Subset + Send + Sync>;

#[derive(Clone)]
enum Eval {
    Table(Arc<[Subset]>),
    Lazy {
        rule: Rule,
        memo: Option<Arc<[AtomicU64]>>,
    },
}

/// A map `2^V -> 2^V` meant to be extensive, isotone and idempotent.
///
/// The axioms are not enforced on construction; [`validate_closure`] checks
/// them. Small operators are stored as a table. Larger ones evaluate a rule
/// on demand, with a lock-free memo up to [`TABLE_MAX_N`] vertices.
#[derive(Clone)]
pub struct ClosureOperator {
    n: usize,
    eval: Eval,
    label: String,
}

impl ClosureOperator {
    /// Wraps an explicit table indexed by subset bits.
    pub fn from_table(n: usize, table: Vec<Subset>, label: impl Into<String>) -> Result<Self> {
        require_table(n, "closure table")?;
        if n == 0 {
            return Err(Error::InvalidArgument("ground set must be nonempty".into()));
        }
        if table.len() != 1usize << n {
            return Err(Error::InvalidArgument(alloc::format!(
                "table has {} entries, expected {}",
                table.len(),
                1usize << n
            )));
        }
        if let Some(bad) = table.iter().find(|s| !s.fits(n)) {
            return Err(Error::MaskOutOfRange { mask: *bad, n });
        }
        Ok(ClosureOperator {
            n,
            eval: Eval::Table(table.into()),
            label: label.into(),
        })
    }

    /// Builds an operator from a rule; materialized eagerly when small.
    pub fn from_fn<F>(n: usize, label: impl Into<String>, rule: F) -> Result<Self>
    where
        F: Fn(Subset) -> Subset + Send + Sync + 'static,
    {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::TooLarge {
                what: "closure operator",
                n,
                cap: MAX_VERTICES,
            });
        }
        let label = label.into();
        if n <= EAGER_MAX_N {
            let table: Vec<Subset> = all_subsets(n).map(|x| rule(x) & Subset::full(n)).collect();
            return Ok(ClosureOperator {
                n,
                eval: Eval::Table(table.into()),
                label,
            });
        }
        let memo = (n <= TABLE_MAX_N).then(|| {
            (0..1usize << n)
                .map(|_| AtomicU64::new(UNSET))
                .collect::<Arc<[AtomicU64]>>()
        });
        Ok(ClosureOperator {
            n,
            eval: Eval::Lazy {
                rule: Arc::new(rule),
                memo,
            },
            label,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    #[inline]
    pub fn ground(&self) -> Subset {
        Subset::full(self.n)
    }

    /// True when the operator is backed by a stored table.
    pub fn is_materialized(&self) -> bool {
        matches!(self.eval, Eval::Table(_))
    }

    /// `cl(X)`, with `X` range-checked.
    pub fn closure_of(&self, x: Subset) -> Result<Subset> {
        if !x.fits(self.n) {
            return Err(Error::MaskOutOfRange { mask: x, n: self.n });
        }
        Ok(self.close(x))
    }

    /// `cl(X)` for a mask already known to fit the ground set.
    #[inline]
    pub fn close(&self, x: Subset) -> Subset {
        debug_assert!(x.fits(self.n), "{x} outside ground set of size {}", self.n);
        match &self.eval {
            Eval::Table(t) => t[x.bits() as usize],
            Eval::Lazy { rule, memo: None } => rule(x) & self.ground(),
            Eval::Lazy {
                rule,
                memo: Some(memo),
            } => {
                let slot = &memo[x.bits() as usize];
                let cached = slot.load(Ordering::Relaxed);
                if cached != UNSET {
                    return Subset::from_bits(cached);
                }
                let y = rule(x) & self.ground();
                slot.store(y.bits(), Ordering::Relaxed);
                y
            }
        }
    }

    /// The full table, for `n <= TABLE_MAX_N`.
    pub fn table(&self) -> Result<Vec<Subset>> {
        require_table(self.n, "closure table")?;
        Ok(all_subsets(self.n).map(|x| self.close(x)).collect())
    }

    /// Same `n` and the same value on every subset.
    pub fn same_map(&self, other: &ClosureOperator) -> Result<bool> {
        if self.n != other.n {
            return Ok(false);
        }
        require_table(self.n, "operator comparison")?;
        Ok(all_subsets(self.n).all(|x| self.close(x) == other.close(x)))
    }

    /// Rank: the size of a smallest spanning set.
    ///
    /// Panics if `cl(V) != V`; [`rank_and_bases`] returns an error instead.
    pub fn rank(&self) -> usize {
        rank_and_bases_inner(self, false).0
    }

    pub fn is_spanning(&self, x: Subset) -> bool {
        self.close(x) == self.ground()
    }
}

impl fmt::Debug for ClosureOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosureOperator")
            .field("n", &self.n)
            .field("label", &self.label)
            .field("materialized", &self.is_materialized())
            .finish()
    }
}

pub(crate) fn require_table(n: usize, what: &'static str) -> Result<()> {
    if n > TABLE_MAX_N {
        Err(Error::TooLarge {
            what,
            n,
            cap: TABLE_MAX_N,
        })
    } else {
        Ok(())
    }
}

pub(crate) fn require_pairs(n: usize, cap: usize, what: &'static str) -> Result<()> {
    if n > cap {
        Err(Error::TooLarge { what, n, cap })
    } else {
        Ok(())
    }
}

/// The property a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    Extensive,
    Isotone,
    Idempotent,
    /// A coding partition has more parts than the alphabet allows.
    PartCount,
    /// `f_X != f_cl(X)`.
    Compatible,
    /// `f_0` is not the universal partition.
    EmptyUniversal,
    /// `0 <= r(X) <= |X|` fails.
    Bounded,
    Increasing,
    Submodular,
    /// `r(X) != r(cl(X))`.
    ClosureInvariant,
}

impl Axiom {
    pub fn id(self) -> &'static str {
        match self {
            Axiom::Extensive => "extensive",
            Axiom::Isotone => "isotone",
            Axiom::Idempotent => "idempotent",
            Axiom::PartCount => "part-count",
            Axiom::Compatible => "compatible",
            Axiom::EmptyUniversal => "empty-universal",
            Axiom::Bounded => "bounded",
            Axiom::Increasing => "increasing",
            Axiom::Submodular => "submodular",
            Axiom::ClosureInvariant => "closure-invariant",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<Subset>,
}

/// Outcome of an exhaustive axiom check. Valid iff no violations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    pub(crate) fn push(&mut self, axiom: Axiom, witness: Vec<Subset>) {
        self.violations.push(Violation { axiom, witness });
    }

    pub(crate) fn has(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    /// Converts the first violation into an error.
    pub fn into_result(self) -> Result<()> {
        match self.violations.into_iter().next() {
            None => Ok(()),
            Some(v) => Err(Error::NotClosure {
                axiom: v.axiom.id(),
                witness: v.witness.first().copied().unwrap_or_default(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ValidateOptions {
    /// Record every witness instead of the first per axiom.
    pub all_witnesses: bool,
    /// Also run the `O(4^n)` pairwise isotonicity check.
    pub pairwise_isotone: bool,
    pub pair_sweep_max_n: usize,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            all_witnesses: false,
            pairwise_isotone: false,
            pair_sweep_max_n: PAIR_SWEEP_MAX_N,
        }
    }
}

/// Checks the three closure axioms over every subset.
///
/// Isotonicity uses the single-vertex test `cl(X) ⊆ cl(X ∪ v)`, which is
/// equivalent to the pairwise definition by induction on `|Y \ X|`.
pub fn validate_closure(op: &ClosureOperator) -> Result<ValidationReport> {
    validate_closure_with(op, ValidateOptions::default())
}

pub fn validate_closure_with(
    op: &ClosureOperator,
    opts: ValidateOptions,
) -> Result<ValidationReport> {
    let n = op.n();
    require_table(n, "closure validation")?;
    let mut report = ValidationReport::default();
    let keep = |report: &ValidationReport, axiom| opts.all_witnesses || !report.has(axiom);

    for x in all_subsets(n) {
        let cx = op.close(x);
        if !x.is_subset_of(cx) && keep(&report, Axiom::Extensive) {
            report.push(Axiom::Extensive, alloc::vec![x]);
        }
        if op.close(cx) != cx && keep(&report, Axiom::Idempotent) {
            report.push(Axiom::Idempotent, alloc::vec![x]);
        }
        for v in x.complement(n).vertices() {
            let y = x.with(v);
            if !cx.is_subset_of(op.close(y)) && keep(&report, Axiom::Isotone) {
                report.push(Axiom::Isotone, alloc::vec![x, y]);
            }
        }
    }

    if opts.pairwise_isotone {
        require_pairs(n, opts.pair_sweep_max_n, "pairwise isotonicity check")?;
        let single = report.has(Axiom::Isotone);
        let mut pairwise = false;
        'outer: for y in all_subsets(n) {
            let cy = op.close(y);
            for x in y.subsets() {
                if !op.close(x).is_subset_of(cy) {
                    pairwise = true;
                    if !single {
                        report.push(Axiom::Isotone, alloc::vec![x, y]);
                    }
                    if !opts.all_witnesses {
                        break 'outer;
                    }
                }
            }
        }
        debug_assert_eq!(single, pairwise, "isotonicity criteria disagree");
    }
    Ok(report)
}

/// `cl(X)` with a range check; free-function form.
pub fn closure_of(op: &ClosureOperator, x: Subset) -> Result<Subset> {
    op.closure_of(x)
}

fn rank_and_bases_inner(op: &ClosureOperator, collect: bool) -> (usize, Vec<Subset>) {
    let v = op.ground();
    for k in 0..=op.n() {
        let mut bases = Vec::new();
        for b in v.subsets_of_size(k) {
            if op.is_spanning(b) {
                bases.push(b);
                if !collect {
                    return (k, bases);
                }
            }
        }
        if !bases.is_empty() {
            return (k, bases);
        }
    }
    unreachable!("an extensive operator spans with V; non-extensive tables are rejected earlier")
}

/// Rank and every basis (minimum spanning set), bases sorted by bits.
///
/// The sweep is by increasing cardinality, so it only touches
/// `sum_{k <= r} C(n, k)` subsets and works for lazily evaluated operators.
pub fn rank_and_bases(op: &ClosureOperator) -> Result<(usize, Vec<Subset>)> {
    if !op.is_spanning(op.ground()) {
        return Err(Error::NotClosure {
            axiom: "extensive",
            witness: op.ground(),
        });
    }
    Ok(rank_and_bases_inner(op, true))
}

/// All closed sets, sorted by bits.
pub fn closed_sets(op: &ClosureOperator) -> Result<Vec<Subset>> {
    require_table(op.n(), "closed-set enumeration")?;
    Ok(all_subsets(op.n()).filter(|&x| op.close(x) == x).collect())
}

/// `cl_1 <= cl_2`: `cl_1(X) ⊆ cl_2(X)` for every `X`.
pub fn operator_le(a: &ClosureOperator, b: &ClosureOperator) -> Result<bool> {
    Ok(operator_le_witness(a, b)?.is_none())
}

/// The first `X` (by bits) with `cl_1(X) ⊄ cl_2(X)`, if any.
pub fn operator_le_witness(a: &ClosureOperator, b: &ClosureOperator) -> Result<Option<Subset>> {
    if a.n() != b.n() {
        return Err(Error::GroundMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    require_table(a.n(), "operator comparison")?;
    Ok(all_subsets(a.n()).find(|&x| !a.close(x).is_subset_of(b.close(x))))
}

impl fmt::Display for ClosureOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = if self.label.is_empty() {
            "closure".to_string()
        } else {
            self.label.clone()
        };
        write!(f, "{label} on {} vertices", self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{chain, uniform};
    use alloc::vec;

    fn table_op(n: usize, entries: &[(u64, u64)]) -> ClosureOperator {
        let mut t: Vec<Subset> = all_subsets(n).collect();
        for &(x, y) in entries {
            t[x as usize] = Subset::from_bits(y);
        }
        ClosureOperator::from_table(n, t, "test").unwrap()
    }

    #[test]
    fn uniform_1_3_closes_singletons_to_v() {
        let u = uniform(1, 3).unwrap();
        assert_eq!(
            u.closure_of(Subset::singleton(2)).unwrap(),
            Subset::full(3)
        );
    }

    #[test]
    fn out_of_range_mask_rejected() {
        let u = uniform(1, 3).unwrap();
        assert!(matches!(
            u.closure_of(Subset::singleton(4)),
            Err(Error::MaskOutOfRange { .. })
        ));
    }

    #[test]
    fn non_extensive_table_reports_witness() {
        // cl({1}) = {2}
        let op = table_op(2, &[(0b01, 0b10)]);
        let report = validate_closure(&op).unwrap();
        assert!(!report.is_valid());
        let first = report
            .violations
            .iter()
            .find(|v| v.axiom == Axiom::Extensive)
            .unwrap();
        assert_eq!(first.witness, vec![Subset::singleton(1)]);
    }

    #[test]
    fn validation_modes_agree_on_chain_and_uniform() {
        let opts = ValidateOptions {
            all_witnesses: true,
            pairwise_isotone: true,
            ..Default::default()
        };
        assert!(validate_closure_with(&chain(3).unwrap(), opts).unwrap().is_valid());
        assert!(validate_closure_with(&uniform(2, 4).unwrap(), opts)
            .unwrap()
            .is_valid());
    }

    #[test]
    fn non_isotone_detected_by_both_criteria() {
        // cl({1}) = {1,2} but cl({1,3}) = {1,3}: not isotone
        let op = table_op(3, &[(0b001, 0b011)]);
        let opts = ValidateOptions {
            all_witnesses: true,
            pairwise_isotone: true,
            ..Default::default()
        };
        let report = validate_closure_with(&op, opts).unwrap();
        assert!(report.has(Axiom::Isotone));
        assert!(!report.has(Axiom::Extensive));
    }

    #[test]
    fn non_idempotent_detected() {
        // cl({1}) = {1,2}, cl({1,2}) = V on n = 3
        let op = table_op(3, &[(0b001, 0b011), (0b011, 0b111)]);
        let report = validate_closure(&op).unwrap();
        assert!(report.has(Axiom::Idempotent));
    }

    #[test]
    fn uniform_rank_and_bases() {
        let (r, bases) = rank_and_bases(&uniform(1, 3).unwrap()).unwrap();
        assert_eq!(r, 1);
        assert_eq!(
            bases,
            vec![Subset::singleton(1), Subset::singleton(2), Subset::singleton(3)]
        );
    }

    #[test]
    fn closed_sets_of_uniform_and_identity() {
        assert_eq!(
            closed_sets(&uniform(1, 3).unwrap()).unwrap(),
            vec![Subset::EMPTY, Subset::full(3)]
        );
        assert_eq!(closed_sets(&uniform(4, 4).unwrap()).unwrap().len(), 16);
    }

    #[test]
    fn chain_closed_sets_are_prefixes() {
        let closed = closed_sets(&chain(3).unwrap()).unwrap();
        assert_eq!(
            closed,
            vec![
                Subset::EMPTY,
                Subset::from_vertices([1]),
                Subset::from_vertices([1, 2]),
                Subset::full(3)
            ]
        );
    }

    #[test]
    fn order_between_uniform_matroids() {
        let u24 = uniform(2, 4).unwrap();
        let u14 = uniform(1, 4).unwrap();
        assert!(operator_le(&u24, &u14).unwrap());
        let w = operator_le_witness(&u14, &u24).unwrap().unwrap();
        assert_eq!(w.len(), 1);
        assert!(matches!(
            operator_le(&u24, &uniform(1, 3).unwrap()),
            Err(Error::GroundMismatch { .. })
        ));
    }

    #[test]
    fn lazy_and_eager_agree() {
        let rule = |x: Subset| {
            if x.len() >= 3 {
                Subset::full(17)
            } else {
                x
            }
        };
        let lazy = ClosureOperator::from_fn(17, "u3", rule).unwrap();
        assert!(!lazy.is_materialized());
        let table = lazy.table().unwrap();
        let eager = ClosureOperator::from_table(17, table, "u3").unwrap();
        assert!(lazy.same_map(&eager).unwrap());
        assert_eq!(lazy.rank(), 3);
    }

    #[test]
    fn wide_operators_refuse_table_sweeps() {
        let op = ClosureOperator::from_fn(30, "wide", |x| x).unwrap();
        assert!(matches!(validate_closure(&op), Err(Error::TooLarge { .. })));
        assert!(matches!(closed_sets(&op), Err(Error::TooLarge { .. })));
        let x = Subset::from_vertices([1, 30]);
        assert_eq!(op.closure_of(x).unwrap(), x);
    }
}
